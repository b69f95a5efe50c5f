import json

import pytest

from async_adders.enums import GateKind, ViolationKind
from async_adders.exceptions import ParseError
from async_adders.models.netlist import Netlist
from async_adders.tools.netlist_checks import gate_census, topological_gates, validate
from tests.fixtures.circuits import dafa, safa  # noqa: F401


def small_netlist(gates, outputs=None):
    return Netlist.from_file_dict({
        "name": "small",
        "inputs": [{"group": "x", "rail1": "x_1", "rail0": "x_0"}],
        "outputs": outputs if outputs is not None else [{"group": "y", "rail1": "y_1", "rail0": "y_0"}],
        "gates": gates,
    })


def test_file_format_uses_in_for_gate_inputs(safa):
    data = json.loads(safa.dumps())
    assert set(data) == {"name", "inputs", "outputs", "gates"}
    assert set(data["gates"][0]) == {"id", "kind", "in", "out"}
    assert Netlist.from_file_dict(data) == safa


def test_load_and_dump(tmp_path, dafa):
    path = str(tmp_path / "dafa.json")
    dafa.dump(path)
    assert Netlist.load(path) == dafa


def test_ce2_spelling_is_accepted():
    netlist = small_netlist([
        {"id": "g1", "kind": "CE2", "in": ["x_1", "x_0"], "out": "y_1"},
        {"id": "g2", "kind": "or2", "in": ["x_1", "x_0"], "out": "y_0"},
    ])
    assert netlist.gate("g1").kind is GateKind.C2
    assert netlist.gate("g2").kind is GateKind.OR2


def test_unknown_kind_is_a_parse_error():
    with pytest.raises(ParseError):
        small_netlist([{"id": "g1", "kind": "XOR2", "in": ["x_1", "x_0"], "out": "y_1"}])


def test_generated_adders_are_well_formed(safa, dafa):
    assert validate(safa).ok
    assert validate(dafa).ok


def test_arity_violation():
    report = validate(small_netlist([
        {"id": "g1", "kind": "AND4", "in": ["x_1", "x_0"], "out": "y_1"},
        {"id": "g2", "kind": "OR2", "in": ["x_1", "x_0"], "out": "y_0"},
    ]))
    assert [v.subjects for v in report.of_kind(ViolationKind.ARITY)] == [["g1"]]


def test_multiple_drivers_and_undriven_net():
    report = validate(small_netlist([
        {"id": "g1", "kind": "OR2", "in": ["x_1", "x_0"], "out": "y_1"},
        {"id": "g2", "kind": "OR2", "in": ["x_1", "x_0"], "out": "y_1"},
    ]))
    assert report.of_kind(ViolationKind.MULTIPLE_DRIVERS)[0].subjects == ["y_1", "g1", "g2"]
    assert report.of_kind(ViolationKind.UNDRIVEN)[0].subjects == ["y_0"]


def test_dangling_net():
    report = validate(small_netlist([
        {"id": "g1", "kind": "OR2", "in": ["x_1", "x_0"], "out": "y_1"},
        {"id": "g2", "kind": "OR2", "in": ["x_1", "x_0"], "out": "y_0"},
        {"id": "g3", "kind": "AND2", "in": ["x_1", "x_0"], "out": "spare"},
    ]))
    assert [v.subjects for v in report.of_kind(ViolationKind.DANGLING)] == [["spare"]]


def test_cycle_is_reported():
    report = validate(small_netlist([
        {"id": "g1", "kind": "C2", "in": ["x_1", "loop"], "out": "y_1"},
        {"id": "g2", "kind": "BUF", "in": ["y_1"], "out": "loop"},
        {"id": "g3", "kind": "OR2", "in": ["x_1", "x_0"], "out": "y_0"},
    ]))
    cycles = report.of_kind(ViolationKind.CYCLE)
    assert len(cycles) == 1
    assert set(cycles[0].subjects) == {"g1", "g2"}


def test_port_using_one_net_for_both_rails():
    report = validate(small_netlist(
        [{"id": "g1", "kind": "OR2", "in": ["x_1", "x_0"], "out": "y_1"}],
        outputs=[{"group": "y", "rail1": "y_1", "rail0": "y_1"}],
    ))
    assert report.of_kind(ViolationKind.PORT)


def test_gate_census_lists_every_kind(safa):
    census = gate_census(safa)
    assert set(census) == set(GateKind)
    assert {k: n for k, n in census.items() if n} == {GateKind.AO22: 4, GateKind.C2: 4, GateKind.OR2: 2}


def test_topological_order_respects_edges(dafa):
    order = {gate_id: i for i, gate_id in enumerate(topological_gates(dafa))}
    drivers = {g.out: g.id for g in dafa.gates}
    for gate in dafa.gates:
        for net in gate.inputs:
            if net in drivers:
                assert order[drivers[net]] < order[gate.id]
