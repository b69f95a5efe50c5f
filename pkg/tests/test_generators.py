import pytest

from async_adders.enums import DecodeState, GateKind
from async_adders.exceptions import UsageError
from async_adders.generator.adders import (
    AdderSpec,
    adder_width,
    decode_sum,
    gen_dafa,
    gen_hybrid_rca,
    operand_bits,
)
from async_adders.generator.handshake import ACKIN, ACKOUT, gen_completion_detector, gen_stage, is_register
from async_adders.tools.netlist_checks import gate_census, validate
from tests.fixtures.circuits import detector4, safa  # noqa: F401


def nonzero(census):
    return {k: n for k, n in census.items() if n}


def test_dafa_census_redundant():
    assert nonzero(gate_census(gen_dafa(redundant=True))) == {
        GateKind.AND4: 20,
        GateKind.AND2: 2,
        GateKind.OR4: 4,
        GateKind.OR3: 4,
        GateKind.C2: 8,
        GateKind.AO22: 2,
        GateKind.OR2: 2,
        GateKind.AO21: 2,
    }


def test_dafa_census_non_redundant():
    census = nonzero(gate_census(gen_dafa(redundant=False)))
    assert census[GateKind.OR2] == 4
    assert GateKind.AO21 not in census


def test_adder_ports(safa):
    assert [p.group for p in safa.inputs] == ["a0", "b0", "cin"]
    assert [p.group for p in safa.outputs] == ["s0", "cout"]
    assert safa.input_group("cin").nets == ("cin_1", "cin_0")


def test_hybrid_rca_32_bit_with_two_safas():
    spec = AdderSpec.for_width(32, 2)
    assert (spec.safa_stages, spec.dafa_stages) == (2, 15)
    netlist = gen_hybrid_rca(spec)
    census = gate_census(netlist)
    assert census[GateKind.AO21] == 2 * 15
    assert census[GateKind.AO22] == 4 * 2 + 2 * 15
    assert len(netlist.inputs) == 65
    assert len(netlist.outputs) == 33
    assert adder_width(netlist) == 32
    assert validate(netlist).ok


def test_parity_mismatch_is_a_usage_error():
    with pytest.raises(UsageError):
        AdderSpec.for_width(5, 2)
    with pytest.raises(UsageError):
        AdderSpec.for_width(4, 6)


def test_spec_label():
    assert AdderSpec.for_width(32, 0, redundant=False).label == "rca32_s0_n"


def test_operand_bits_and_decode():
    bits = operand_bits(4, 0b0101, 0b0011, 1)
    assert [bits[f"a{i}"] for i in range(4)] == [1, 0, 1, 0]
    assert [bits[f"b{i}"] for i in range(4)] == [1, 1, 0, 0]
    assert bits["cin"] == 1
    with pytest.raises(UsageError):
        operand_bits(4, 16, 0, 0)


def test_decode_sum_requires_every_pair():
    assert decode_sum({"s0": DecodeState.VALID_1, "cout": DecodeState.VALID_0}, 1) == (1, 0)
    assert decode_sum({"s0": DecodeState.VALID_1, "cout": DecodeState.SPACER}, 1) is None


def test_completion_detector_shape(detector4):
    assert nonzero(gate_census(detector4)) == {GateKind.OR2: 4, GateKind.C2: 3}
    assert detector4.acks.ackout == "done"
    assert detector4.outputs == []
    assert validate(detector4).ok


def test_single_pair_detector_is_one_or2():
    detector = gen_completion_detector(1)
    assert [(g.kind, g.out) for g in detector.gates] == [(GateKind.OR2, "done")]


def test_detector_needs_a_pair():
    with pytest.raises(UsageError):
        gen_completion_detector(0)


def test_stage_wraps_register_and_detector(safa):
    stage = gen_stage(safa)
    registers = [g for g in stage.gates if is_register(g.id)]
    assert len(registers) == 6
    assert all(g.kind is GateKind.C2 and g.inputs[1] == ACKIN for g in registers)
    assert stage.gate("reg.a0_1").inputs == ["in.a0_1", ACKIN]
    assert stage.input_group("a0").nets == ("in.a0_1", "in.a0_0")
    assert (stage.acks.ackin, stage.acks.ackout) == (ACKIN, ACKOUT)
    assert len(stage.gates) == len(safa.gates) + 6 + 3
    assert validate(stage).ok


def test_stage_cannot_wrap_twice(safa, detector4):
    with pytest.raises(UsageError):
        gen_stage(gen_stage(safa))
    with pytest.raises(UsageError):
        gen_stage(detector4)
