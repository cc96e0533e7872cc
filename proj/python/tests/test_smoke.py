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

import json
import math

import pytest

import layerfid as lf


@pytest.fixture(scope="module")
def grid():
    return lf.synth_snapshot("grid:2x3", lf.Regime.BALANCED, 7)


def test_synth_is_deterministic(grid):
    again = lf.synth_snapshot("grid:2x3", lf.Regime.BALANCED, 7)
    assert again == grid
    assert again.id == grid.id
    assert len(grid.qubits) == 6
    assert len(grid.edges) == 7


def test_snapshot_json_round_trip(grid):
    text = grid.to_json()
    assert json.loads(text)["backend"] == grid.backend_name
    assert lf.parse_snapshot(text) == grid


def test_noiseless_run_is_exact(grid):
    prep = lf.StatePrep(1.1, 0.3)
    phys = lf.run(grid, prep=prep, ns=0.0)
    assert phys.fidelity == pytest.approx(1.0, abs=1e-12)
    enc = lf.run(grid, mode=lf.TeleportMode.ENCODED, prep=prep, ns=0.0)
    assert enc.fidelity == pytest.approx(1.0, abs=1e-12)
    assert len(enc.layout.mapping) == 6


def test_noisy_run_and_explicit_layout(grid):
    res = lf.run(grid, prep=lf.StatePrep(math.pi / 2), layout=[0, 1, 2],
                 pulse=lf.PulseAssignment.uniform(lf.PulseShape.DRAG))
    assert res.layout.label == "0-1-2"
    assert 0.5 < res.fidelity < 1.0
    assert res.throughput == pytest.approx(res.fidelity * res.accept)


def test_errors_carry_code(grid):
    with pytest.raises(lf.LayerfidError) as info:
        lf.run(grid, layout=[0, 2, 4])
    assert info.value.args[0] == "RoutingRequired"
    with pytest.raises(lf.LayerfidError):
        lf.StatePrep(4.0, 0.0)
    with pytest.raises(lf.LayerfidError):
        lf.run(grid, ns=-1.0)


def test_waterfall_is_additive(grid):
    w = lf.waterfall(grid, lf.StatePrep(math.pi / 2))
    assert w.delta_l2 + w.delta_l3 == pytest.approx(w.total, abs=1e-12)
    assert w.f_after_l3 >= w.f_after_l2 - 1e-12


def test_cascade_paths_shrink(grid):
    rows = lf.filter_cascade(grid, prep=lf.StatePrep(1.0))
    counts = [r.path_count for r in rows]
    assert counts == sorted(counts, reverse=True)
    nodes, edges = lf.filter_graph(grid, lf.FilterThresholds(e2q_max=0.0))
    assert len(nodes) == 6 and not edges


def test_sweep_and_csv(grid):
    rows = lf.noise_sweep(grid, [lf.StatePrep(math.pi)], [0.0, 1.0])
    assert len(rows) == 2
    assert rows[0].f_log == pytest.approx(1.0, abs=1e-12)
    csv = lf.sweep_csv(rows)
    assert csv.splitlines()[0].startswith("mode,")
    assert len(csv.strip().splitlines()) == 5
