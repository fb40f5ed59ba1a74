"""
pages/2_Lemma1_Lab.py
Numerical check of index additivity on catalog manifolds.
"""

import sys
import os

sys.path.insert(0, os.path.join(os.path.dirname(__file__), ".."))

import streamlit as st
import plotly.graph_objects as go
import pandas as pd

from utils.catalog import parse_catalog_spec, partner_specs
from utils.config import DEFAULT_WEIGHTS, LabSettings
from utils.exceptions import MorseError
from utils.numerical_lab import verify_lemma1
from utils.reports import lemma1_frame
from utils.theme import CHART_LAYOUT, apply_theme, status_badge

# ── Page config ────────────────────────────────────────────────────────────────
st.set_page_config(
    page_title="Lemma 1 Lab | Morse Toolkit",
    page_icon="∿",
    layout="wide",
)

apply_theme()

CHOICES = ["circle_cos:1", "circle_cos:2", "circle_cos:3", "sphere_height", "torus_height"]
# Larger products are CLI-only.
INTERACTIVE_MAX_DIM = 3
INDEX_COLORS = ["#4fc3f7", "#81c784", "#ffb74d", "#e57373"]

st.markdown("<h2>Diagonal Morse functions: index additivity</h2>", unsafe_allow_html=True)
st.caption("Critical points of a·f1(x1) + b·f2(x2) found by grid-seeded Newton iteration on finite differences.")
st.divider()

col_a, col_b, col_w = st.columns(3)
with col_a:
    f1_spec = st.selectbox("f1", CHOICES, index=0)
with col_b:
    f2_spec = st.selectbox("f2", partner_specs(f1_spec, CHOICES, INTERACTIVE_MAX_DIM), index=0)
with col_w:
    a = st.number_input("weight a", min_value=0.05, max_value=5.0, value=round(DEFAULT_WEIGHTS[0], 4))
    b = st.number_input("weight b", min_value=0.05, max_value=5.0, value=round(DEFAULT_WEIGHTS[1], 4))


@st.cache_data(show_spinner=False)
def run_lab(f1_spec: str, f2_spec: str, a: float, b: float):
    return verify_lemma1(parse_catalog_spec(f1_spec), parse_catalog_spec(f2_spec), (a, b), LabSettings.from_env())


try:
    with st.spinner("Searching for critical points…"):
        report = run_lab(f1_spec, f2_spec, float(a), float(b))
except MorseError as exc:
    st.error(str(exc))
    st.stop()

status_badge("LEMMA 1", "PASS" if report.passed else "FAIL", f"{len(report.product_points)} critical points")

m1, m2, m3, m4 = st.columns(4)
m1.metric("crit(f1)", len(report.first_points))
m2.metric("crit(f2)", len(report.second_points))
m3.metric("crit(f)", len(report.product_points))
m4.metric("Bijective pairing", "yes" if report.bijective else "no")

# ── Histogram vs convolution ───────────────────────────────────────────────────
col_hist, col_values = st.columns(2)
with col_hist:
    idx = list(range(len(report.found_histogram)))
    fig = go.Figure()
    fig.add_trace(go.Bar(x=idx, y=list(report.found_histogram), name="found", marker_color="#80cbc4"))
    fig.add_trace(go.Bar(x=idx, y=list(report.expected_histogram), name="convolution", marker_color="#ffb74d"))
    layout = dict(CHART_LAYOUT)
    layout["title"] = dict(text="Index histogram", font=dict(size=14))
    fig.update_layout(barmode="group", **layout)
    st.plotly_chart(fig, use_container_width=True)

with col_values:
    points = pd.DataFrame(
        [{"point": n, "value": p.value, "index": p.index} for n, p in enumerate(report.product_points)]
    )
    fig = go.Figure()
    for i, sub in points.groupby("index"):
        fig.add_trace(
            go.Scatter(x=sub["point"], y=sub["value"], mode="markers", name=f"index {i}",
                       marker=dict(size=10, color=INDEX_COLORS[int(i) % len(INDEX_COLORS)]))
        )
    layout = dict(CHART_LAYOUT)
    layout["title"] = dict(text="Critical values by index", font=dict(size=14))
    fig.update_layout(**layout)
    st.plotly_chart(fig, use_container_width=True)

st.markdown("#### Pairing table")
st.dataframe(lemma1_frame(report), use_container_width=True, hide_index=True)

for failure in report.failures:
    st.warning(failure)
