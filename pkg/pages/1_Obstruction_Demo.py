"""
pages/1_Obstruction_Demo.py
Stabilized family of f' and the diagonal products with a fixed f.
"""

import sys
import os

sys.path.insert(0, os.path.join(os.path.dirname(__file__), ".."))

import streamlit as st
import plotly.graph_objects as go

from utils.descriptor_io import parse_int_list
from utils.exceptions import MorseError
from utils.morse_algebra import ExtraMiddlePair, MorseDescriptor, phi
from utils.obstruction import verify_theorem4
from utils.reports import obstruction_frame
from utils.theme import CHART_LAYOUT, apply_theme, status_badge

# ── Page config ────────────────────────────────────────────────────────────────
st.set_page_config(
    page_title="Obstruction Demo | Morse Toolkit",
    page_icon="∿",
    layout="wide",
)

apply_theme()

st.markdown("<h2>Diagonal products do not descend to classes</h2>", unsafe_allow_html=True)
st.caption("f_k = f' plus k cancelling pairs per index: one class, yet distinct diagonal products when φ_m(f) ≠ 0.")
st.divider()

# ── Controls ───────────────────────────────────────────────────────────────────
col_f, col_fp, col_opts = st.columns([1, 1, 1])
with col_f:
    f_text = st.text_input("f: counts on M (m = len − 1)", value="1, 1, 2")
with col_fp:
    fp_text = st.text_input("f': counts on M'", value="1, 1")
with col_opts:
    K = st.slider("Family size K", min_value=1, max_value=20, value=10)
    mode = st.selectbox("Extra middle pair", [m.value for m in ExtraMiddlePair], index=0)


@st.cache_data
def run_demo(f_counts: tuple, fp_counts: tuple, K: int, mode: str):
    d = MorseDescriptor.build(list(f_counts), terms=[("M", 1)])
    d_prime = MorseDescriptor.build(list(fp_counts), terms=[("N", 1)])
    return verify_theorem4(d, d_prime, K, ExtraMiddlePair(mode)), phi(d, d.m)


try:
    report, phi_top = run_demo(tuple(parse_int_list(f_text)), tuple(parse_int_list(fp_text)), K, mode)
except MorseError as exc:
    st.error(str(exc))
    st.stop()

status_badge("THEOREM 4", "PASS" if report.passed else "FAIL", f"φ_m(f) = {phi_top}")

m1, m2, m3 = st.columns(3)
m1.metric("φ_m(f)", phi_top)
m2.metric("First spacing (k 0→1)", report.first_spacing)
m3.metric("Steady spacing", report.steady_spacing if report.steady_spacing is not None else "–")

# ── Top-φ chart ────────────────────────────────────────────────────────────────
frame = obstruction_frame(list(report.rows))
fig = go.Figure()
fig.add_trace(
    go.Scatter(x=frame["k"], y=frame["product_phi_top"], name="φ_top of diagonal", mode="lines+markers",
               line=dict(color="#80cbc4", width=2))
)
fig.add_trace(
    go.Scatter(x=frame["k"], y=frame["proof_formula_phi_top"], name="proof formula", mode="lines",
               line=dict(color="#ffb74d", dash="dash"))
)
layout = dict(CHART_LAYOUT)
layout["title"] = dict(text="Top φ of the diagonal Morse function by k", font=dict(size=14))
fig.update_layout(**layout)
st.plotly_chart(fig, use_container_width=True)

# ── Checks & table ─────────────────────────────────────────────────────────────
for check in report.checks:
    status_badge(check.name, "PASS" if check.passed else "FAIL", check.detail)

st.markdown("#### Obstruction table")
st.dataframe(frame, use_container_width=True, hide_index=True)
