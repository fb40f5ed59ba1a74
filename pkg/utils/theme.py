"""Shared Streamlit theme utilities for the Morse cobordism dashboard."""

import streamlit as st

from utils.config import STATUS_COLOR

CHART_LAYOUT = dict(
    paper_bgcolor="#10141f",
    plot_bgcolor="#10141f",
    font_color="#b0bec5",
    xaxis=dict(gridcolor="#263238", showgrid=True),
    yaxis=dict(gridcolor="#263238", showgrid=True),
    margin=dict(l=40, r=20, t=40, b=40),
    height=300,
)


def apply_theme() -> None:
    """Inject global CSS: dark background, accent headings, badge styling."""
    st.markdown(
        """
        <style>
        .stApp {
            background: linear-gradient(160deg, #0b0f19 0%, #131a2a 60%, #1a2336 100%);
            color: #eceff1;
        }

        h1, h2, h3, h4 {
            color: #80cbc4 !important;
        }

        div[data-testid="metric-container"] {
            background: rgba(38, 50, 56, 0.6);
            border: 1px solid rgba(128, 203, 196, 0.3);
            border-radius: 10px;
            padding: 12px;
        }

        .status-badge {
            border-radius: 6px;
            padding: 8px 16px;
            margin-bottom: 12px;
            font-weight: 700;
        }
        </style>
        """,
        unsafe_allow_html=True,
    )


def status_badge(label: str, status: str, detail: str = "") -> None:
    """Render a coloured verdict banner; status is a STATUS_COLOR key."""
    color = STATUS_COLOR[status]
    st.markdown(
        f"<div class='status-badge' style='background:{color}22; border-left:4px solid {color};'>"
        f"<span style='color:{color};'>&#9679; {label}: {status}</span>"
        f"{'&nbsp;&nbsp;<span style=color:#90a4ae;>' + detail + '</span>' if detail else ''}"
        f"</div>",
        unsafe_allow_html=True,
    )
