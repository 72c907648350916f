import os
import sys

import streamlit as st

# Add the project root to the Python path
project_root = os.path.dirname(os.path.abspath(__file__))
if project_root not in sys.path:
    sys.path.append(project_root)

from src.parsers.spec_parser import parse_spec, SpecParserError
from src.parsers.circuit_parser import serialize_circuit
from src.core.pipeline import (
    analyze_permutation, synthesize_hybrid, synthesize_kcycle, synthesize_mmd, SynthesisError,
)
from src.core.circuit_ir import SimulationCapacityError
from src.DTOs.models import ConfigError, HwbConfig, RouterConfig, SimulationConfig
from src.utils.generators import gen_hwb, gen_random_perm
from src.utils.reporting import difference_frame, format_report

METHODS = {
    "hybrid": synthesize_hybrid,
    "kcycle": synthesize_kcycle,
    "mmd-standin": synthesize_mmd,
}

st.set_page_config(layout="wide", page_title="cyclesynth")

st.title("Cycle-Based Reversible Logic Synthesis")

st.sidebar.header("Input Function")

# --- 1. SOURCE --- #
source = st.sidebar.radio("Source", ["Specification file", "hwb", "Random permutation"])
uploaded_spec = None
if source == "Specification file":
    uploaded_spec = st.sidebar.file_uploader("Upload Specification (.spec)", type=["spec", "txt"])
else:
    width = st.sidebar.number_input("Lines (n)", min_value=2, max_value=16, value=7)
    if source == "hwb":
        rotation = st.sidebar.selectbox("Rotation", ["left", "right"])
    else:
        seed = st.sidebar.number_input("Seed", min_value=0, value=0)

# --- 2. ROUTER SETTINGS --- #
st.sidebar.subheader("Router")
method = st.sidebar.selectbox("Method", list(METHODS))
distance_threshold = st.sidebar.slider("Distance threshold", 0.0, 1.0, 0.5)
nop_factor = st.sidebar.number_input("NoP factor", min_value=0.0001, value=0.005, format="%.4f")
tie_goes_to_kcycle = st.sidebar.checkbox("Distance tie routes to k-cycle", value=False)

col1, col2 = st.columns(2)

with col1:
    st.header("Synthesis Controls")
    if st.button("Synthesize"):
        st.session_state['analysis'] = None
        st.session_state['report'] = None
        st.session_state['circuit_text'] = None
        st.session_state['errors'] = []
        try:
            if source == "Specification file":
                if uploaded_spec is None:
                    raise SpecParserError("Error: Please upload a specification file.")
                perm = parse_spec(uploaded_spec.getvalue().decode("utf-8"))
            elif source == "hwb":
                perm = gen_hwb(int(width), HwbConfig(rotation=rotation))
            else:
                perm = gen_random_perm(int(width), int(seed))
            st.write("✅ Function loaded.")

            cfg = RouterConfig(
                distance_threshold=distance_threshold,
                nop_factor=nop_factor,
                tie_goes_to_kcycle=tie_goes_to_kcycle,
            )
            st.session_state['analysis'] = analyze_permutation(perm, cfg)
            st.session_state['differences'] = difference_frame(perm)
            circuit, report = METHODS[method](perm, cfg, SimulationConfig.from_env())
            st.session_state['report'] = report
            st.session_state['report_text'] = format_report(report)
            st.session_state['circuit_text'] = serialize_circuit(circuit)
            st.success("Synthesis completed!")
        except SpecParserError as e:
            st.error(f"Specification Error: {e}")
            st.session_state['errors'].append(f"Specification: {e}")
        except ConfigError as e:
            st.error(f"Configuration Error: {e}")
            st.session_state['errors'].append(f"Configuration: {e}")
        except (SynthesisError, SimulationCapacityError) as e:
            st.error(f"Synthesis Error: {e}")
            st.session_state['errors'].append(f"Synthesis: {e}")
        except Exception as e:
            st.error(f"An unexpected error occurred: {e}")
            st.session_state['errors'].append(f"Unexpected: {e}")

with col2:
    st.header("Circuit")
    if st.session_state.get('circuit_text'):
        st.text_area("TFC circuit", value=st.session_state['circuit_text'], height=300)
        st.download_button("Download circuit", st.session_state['circuit_text'], file_name="circuit.tfc")

# --- Results --- #
st.header("Results")
if st.session_state.get('errors'):
    st.subheader("Issues:")
    for error_msg in st.session_state['errors']:
        st.error(error_msg)

if st.session_state.get('analysis'):
    analysis = st.session_state['analysis']
    st.subheader("Function Analysis")
    st.json({
        "n": analysis.n,
        "distance": analysis.distance,
        "nop": analysis.nop,
        "category": analysis.category,
        "moved_rows": analysis.statistics.moved_rows,
        "movable_rows": analysis.movable_rows,
        "cycle_lengths": analysis.statistics.length_histogram,
        "parity": analysis.statistics.parity.value,
        "estimate": analysis.estimate,
    })
    st.subheader("f(i) - i")
    st.line_chart(st.session_state['differences'], x="i", y="diff")

if st.session_state.get('report'):
    report = st.session_state['report']
    st.subheader("Synthesis Report")
    st.text(st.session_state['report_text'])
    if report.gate_classes:
        st.dataframe([report.gate_classes])
    for issue in report.warnings:
        st.warning(f"{issue.issue_type}: {issue.message}")
