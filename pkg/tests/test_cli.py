import pytest
import yaml
from pydantic import BaseModel, ValidationError

from async_adders.cli import Cli, main
from async_adders.enums import Circuit, GateKind, ReportFormat
from async_adders.generator.adders import AdderSpec, gen_hybrid_rca, gen_safa
from async_adders.generator.handshake import gen_stage
from async_adders.models.config import DEFAULT_COUNT, DEFAULT_SEED, RunConfig
from async_adders.models.netlist import Netlist
from async_adders.tools.netlist_checks import gate_census
from tests.fixtures.circuits import EXAMPLE_DELAYS, SAMPLE_VECTORS, swap_output_rails, without_drivers


def exit_code(argv):
    with pytest.raises(SystemExit) as e:
        main(argv)
    return e.value.code


def read_yaml(path):
    with open(path) as f:
        return yaml.safe_load(f)


def test_run_config_defaults():
    cfg = RunConfig(command="verify")
    assert cfg.seed == DEFAULT_SEED
    assert cfg.draws == DEFAULT_COUNT
    assert cfg.format is ReportFormat.CSV


def test_run_config_exclusive_options():
    with pytest.raises(ValidationError):
        RunConfig(command="sim", vectors="x.vec", count=3)
    with pytest.raises(ValidationError):
        RunConfig(command="sta", netlist="x.json", circuit="rca")
    assert RunConfig(command="compare", source="table2").source == "practical"


def test_cli_merges_config_file_and_flags(tmp_path):
    config = tmp_path / "run.yml"
    config.write_text("circuit: rca\nwidth: 4\nsafa: 0\nseed: 99\n")
    cli = Cli(["--config", str(config), "build", "--safa", "2"])
    cli._load_config()
    assert cli.config.circuit is Circuit.RCA
    assert (cli.config.width, cli.config.safa, cli.config.seed) == (4, 2, 99)


def test_build_safa(tmp_path):
    out = tmp_path / "safa.json"
    main(["build", "safa", "-o", str(out)])
    netlist = Netlist.load(str(out))
    census = {k: n for k, n in gate_census(netlist).items() if n}
    assert census == {GateKind.AO22: 4, GateKind.C2: 4, GateKind.OR2: 2}


def test_build_stage(tmp_path):
    out = tmp_path / "stage.json"
    main(["build", "rca", "--width", "4", "--safa", "2", "--stage", "-o", str(out)])
    stage = Netlist.load(str(out))
    assert stage.acks.ackin == "ackin"
    assert stage.name == "rca4_s2_r_stage"


def test_build_parity_error():
    assert exit_code(["build", "rca", "--width", "5", "--safa", "2"]) == 2


def test_sta_adder11(tmp_path):
    out = tmp_path / "sta.yml"
    main(["sta", "--width", "32", "--safa", "2", "-o", str(out)])
    report = read_yaml(out)
    assert report["value"] == 20
    assert report["expr"]["includes_register"] is True
    assert report["path"][0].startswith("reg.")


def test_sta_without_register(tmp_path):
    out = tmp_path / "sta.yml"
    cli = Cli(["sta", "--width", "4", "--safa", "2", "--no-register", "-o", str(out)])
    cli._load_config()
    assert cli.config.with_register is False
    main(["sta", "--width", "4", "--safa", "2", "--no-register", "-o", str(out)])
    assert read_yaml(out)["expr"]["includes_register"] is False


def test_run_config_fields_do_not_shadow_model_attributes():
    assert not set(RunConfig.model_fields) & set(dir(BaseModel))


def test_compare_table2(tmp_path):
    out = tmp_path / "compare.csv"
    main(["compare", "--source", "table2", "-o", str(out)])
    lines = out.read_text().splitlines()
    assert lines[0] == "legend,description,latency,normalized,reduction_vs_adder11_percent,source"
    adder13 = next(line for line in lines if line.startswith("Adder13,"))
    assert ",35.3," in adder13


def test_compare_both_is_yaml(tmp_path):
    out = tmp_path / "correlation.yml"
    main(["compare", "--source", "both", "-o", str(out)])
    assert len(read_yaml(out)["rows"]) == 17


def test_sweep_with_example_table(tmp_path):
    out = tmp_path / "sweep.yml"
    main(["sweep", "--width", "32", "--delays", EXAMPLE_DELAYS, "-f", "yaml", "-o", str(out)])
    assert read_yaml(out)["argmin"] == [2]


def test_sweep_csv(tmp_path):
    out = tmp_path / "sweep.csv"
    main(["sweep", "--width", "4", "-o", str(out)])
    assert out.read_text().splitlines()[0] == "safa,dafa,latency,expr"


def test_verify_dafa(tmp_path):
    out = tmp_path / "verify.yml"
    main(["verify", "dafa", "--non-redundant", "-o", str(out)])
    report = read_yaml(out)
    assert report["checked"] == 32
    assert report["failures"] == 0


def test_verify_fault_exit_code(tmp_path):
    faulty = tmp_path / "faulty.json"
    swap_output_rails(gen_hybrid_rca(AdderSpec.for_width(4, 2)), "s0").dump(str(faulty))
    assert exit_code(["verify", "--netlist", str(faulty), "-o", str(tmp_path / "v.yml")]) == 4
    report = read_yaml(tmp_path / "v.yml")
    assert report["first_counterexample"]["index"] == 0


def test_sim_with_vector_file(tmp_path):
    out, vcd = tmp_path / "sim.yml", tmp_path / "sim.vcd"
    main([
        "sim", "rca", "--width", "4", "--safa", "2", "--vectors", SAMPLE_VECTORS,
        "--vcd", str(vcd), "-o", str(out),
    ])
    assert read_yaml(out)["completed"] == 5
    assert vcd.read_text().startswith("$version async_adders $end")


def test_sim_is_reproducible(tmp_path):
    first, second = tmp_path / "a.yml", tmp_path / "b.yml"
    for out in (first, second):
        main(["sim", "dafa", "--count", "20", "--max-skew", "4", "--seed", "3", "-o", str(out)])
    assert first.read_text() == second.read_text()


def test_sim_deadlock_exit_code(tmp_path):
    broken = tmp_path / "broken.json"
    without_drivers(gen_stage(gen_safa()), "cout_1", "cout_0").dump(str(broken))
    assert exit_code(["sim", "--netlist", str(broken), "--count", "1"]) == 5


def test_sim_vectors_and_count_exclusive():
    assert exit_code(["sim", "--vectors", SAMPLE_VECTORS, "--count", "3"]) == 2


def test_missing_netlist_is_a_parse_error(tmp_path):
    assert exit_code(["sta", "--netlist", str(tmp_path / "missing.json")]) == 3


def test_classify_safa(tmp_path):
    out = tmp_path / "classify.yml"
    main(["classify", "safa", "--count", "6", "-o", str(out)])
    assert read_yaml(out)["classification"] == "early"
