# Copyright 2026 The layerfid Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.
"""Layer-wise fidelity attribution for simulated quantum teleportation."""

from ._core import (
    AblationLadder,
    BandReport,
    CalibrationSnapshot,
    CascadeRow,
    EdgeCal,
    FilterThresholds,
    L3Report,
    LayerfidError,
    LayoutCandidate,
    PulseAssignment,
    PulseScore,
    PulseShape,
    QubitCal,
    Regime,
    RunResult,
    StatePrep,
    SweepRow,
    TeleportMode,
    WaterfallReport,
    ablation_ladder,
    admissible_layouts,
    all_pulse_assignments,
    band_of,
    default_cascade_stages,
    filter_cascade,
    filter_graph,
    l3_isolation,
    load_snapshot,
    noise_sweep,
    parse_snapshot,
    run,
    sweep_csv,
    synth_snapshot,
    waterfall,
)

__all__ = [name for name in dir() if not name.startswith("_")]
