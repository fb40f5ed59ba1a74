"""
app.py
Invariant calculator – main entry point for the Streamlit multi-page app.
"""

import sys
import os

sys.path.insert(0, os.path.dirname(__file__))

import streamlit as st
import plotly.graph_objects as go

from utils.descriptor_io import parse_int_list, parse_terms
from utils.exceptions import MorseError
from utils.morse_algebra import (
    MorseDescriptor,
    cobordism_invariant,
    euler_characteristic,
    validate,
)
from utils.reports import descriptor_frame, invariant_frame
from utils.theme import CHART_LAYOUT, apply_theme, status_badge

# ── Page config ────────────────────────────────────────────────────────────────
st.set_page_config(
    page_title="Morse Cobordism Toolkit",
    page_icon="∿",
    layout="wide",
    initial_sidebar_state="expanded",
)

apply_theme()

# ── Sidebar ────────────────────────────────────────────────────────────────────
with st.sidebar:
    st.markdown("## Morse function")
    counts_text = st.text_input("Counts C_0, …, C_m", value="1, 1, 2")
    oriented = st.toggle("Oriented source manifold", value=False)
    terms_text = st.text_input("Class token (e.g. 'S2' or '2 P, Q')", value="S2")
    use_betti = st.checkbox("Supply Betti numbers", value=False)
    betti_text = st.text_input("Betti numbers b_0, …, b_m", value="1, 0, 1", disabled=not use_betti)
    st.markdown("---")
    st.markdown("Other pages: obstruction demo and the numerical Lemma 1 lab.")

# ── Header ─────────────────────────────────────────────────────────────────────
st.markdown("<h1 style='text-align:center;'>MORSE COBORDISM TOOLKIT</h1>", unsafe_allow_html=True)
st.caption("Critical point counts → fold cobordism invariant")
st.divider()

try:
    descriptor = MorseDescriptor.build(
        parse_int_list(counts_text),
        oriented=oriented,
        terms=parse_terms(terms_text),
        betti=parse_int_list(betti_text) if use_betti else None,
    )
except MorseError as exc:
    st.error(str(exc))
    st.stop()

violations = validate(descriptor)
if violations:
    status_badge("DESCRIPTOR", "FAIL", f"{len(violations)} violated invariant(s)")
    for v in violations:
        st.markdown(f"- **{v.invariant}**: {v.reason}")
    st.stop()

status_badge("DESCRIPTOR", "PASS", f"dimension {descriptor.m}")

# ── Metrics row ────────────────────────────────────────────────────────────────
col1, col2, col3, col4 = st.columns(4)
col1.metric("Dimension", descriptor.m)
col2.metric("Critical points", descriptor.counts.total)
col3.metric("Euler characteristic", euler_characteristic(descriptor))
col4.metric("Class token", str(descriptor.manifold.token))

st.divider()

# ── Invariant ──────────────────────────────────────────────────────────────────
col_chart, col_inv = st.columns([2, 1])

with col_chart:
    frame = descriptor_frame(descriptor)
    fig = go.Figure()
    fig.add_trace(go.Bar(x=frame["index"], y=frame["count"], name="C_j", marker_color="#80cbc4"))
    fig.add_trace(go.Bar(x=frame["index"], y=frame["phi"], name="φ_j", marker_color="#ffb74d"))
    if "betti" in frame:
        fig.add_trace(go.Scatter(x=frame["index"], y=frame["betti"], name="b_j", mode="markers", marker=dict(size=12)))
    layout = dict(CHART_LAYOUT)
    layout["title"] = dict(text="Counts and φ by index", font=dict(size=14))
    fig.update_layout(barmode="group", **layout)
    st.plotly_chart(fig, use_container_width=True)

with col_inv:
    st.markdown("#### Cobordism invariant")
    try:
        invariant = cobordism_invariant(descriptor)
    except MorseError as exc:
        st.error(str(exc))
    else:
        st.markdown(f"Token: `{invariant.token}`")
        if invariant.phis or invariant.z2 is not None:
            st.dataframe(invariant_frame(invariant), use_container_width=True, hide_index=True)
        else:
            st.caption("No φ components are classified in this dimension.")

st.markdown("#### Index table")
st.dataframe(descriptor_frame(descriptor), use_container_width=True, hide_index=True)
