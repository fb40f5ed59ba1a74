"""
utils/__init__.py
Morse function cobordism toolkit: exact algebra, obstruction demo and numerical lab.
"""
