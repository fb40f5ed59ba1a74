"""Smoke tests: each dashboard page renders its default inputs without errors."""

from pathlib import Path

import pytest

testing = pytest.importorskip("streamlit.testing.v1")

ROOT = Path(__file__).resolve().parent.parent


@pytest.mark.parametrize(
    "script",
    ["app.py", "pages/1_Obstruction_Demo.py", "pages/2_Lemma1_Lab.py"],
)
def test_page_renders(script):
    at = testing.AppTest.from_file(str(ROOT / script), default_timeout=120)
    at.run()
    assert not at.exception
    assert not at.error


def test_lemma_lab_offers_only_three_dimensional_products():
    at = testing.AppTest.from_file(str(ROOT / "pages/2_Lemma1_Lab.py"), default_timeout=120)
    at.run()
    at.selectbox[0].select("torus_height").run()
    assert list(at.selectbox[1].options) == ["circle_cos:1", "circle_cos:2", "circle_cos:3"]
    assert not at.exception
