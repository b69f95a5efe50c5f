import argparse
import logging
import sys
from typing import Optional, Sequence

from pydantic import ValidationError
from rich.console import Console
from rich.logging import RichHandler
from rich.table import Table
from rich_argparse import RawDescriptionRichHelpFormatter

from async_adders.enums import Circuit, ReportFormat, ReportSource, VerifyMode
from async_adders.exceptions import CliError, UsageError, VerificationFailure
from async_adders.generator.adders import AdderSpec, adder_width, gen_dafa, gen_hybrid_rca, gen_safa
from async_adders.generator.handshake import gen_completion_detector, gen_stage
from async_adders.models.config import DEFAULT_SEED, RunConfig
from async_adders.models.delays import DelayTable
from async_adders.models.netlist import Netlist
from async_adders.simulator.protocol import adder_vectors, classify_indication, parse_vector_text, run_protocol
from async_adders.simulator.waveform import render_vcd
from async_adders.timing.formulas import CONFIGURATIONS, latency_expr_table
from async_adders.timing.reports import (
    compare_report,
    correlation_report,
    report_to_csv,
    report_to_yaml,
    sweep_hybrid,
)
from async_adders.timing.sta import critical_path
from async_adders.tools.netlist_checks import gate_census, validate
from async_adders.utils import FileHandler
from async_adders.verification.equations import (
    DAFA_EQUATIONS,
    SAFA_EQUATIONS,
    dsop_check,
    equation_equivalence,
    monotonic_cover_check,
)
from async_adders.verification.harness import exhaustive_verify

logging.basicConfig(
    level=logging.INFO, format="%(message)s", datefmt="[%X]", handlers=[RichHandler()]
)


class Cli:
    HEADER = f"""
    Generate, simulate, verify and time early output dual-rail asynchronous adders

    Every random choice is drawn from --seed (default {DEFAULT_SEED}).

    exit codes:
      0  success
      1  internal error
      2  usage error (invalid parameters or flag combinations)
      3  parse error (netlist, delay table, vector or config file)
      4  verification failure
      5  handshake deadlock
    """

    def __init__(self, argv: Optional[Sequence[str]] = None):
        self._args_parser = self._init_argparser()
        self._file_handler = FileHandler()
        self.args = self._args_parser.parse_args(argv)
        self.console = Console(stderr=True)
        self.config: Optional[RunConfig] = None

    def _init_argparser(self):
        """Create and configure the argument parser"""
        parser = argparse.ArgumentParser(
            prog="async_adders",
            description=self.HEADER,
            formatter_class=RawDescriptionRichHelpFormatter,
        )
        parser.add_argument("--config", help="YAML file with run options; flags override it", type=str)
        parser.add_argument("--verbose", "-v", help="Log at DEBUG level", action="store_true", default=False)

        # every option defaults to None so that only explicit flags override --config values
        circuit = argparse.ArgumentParser(add_help=False)
        circuit.add_argument("--netlist", help="Netlist JSON file instead of a generated circuit", type=str)
        circuit.add_argument("--width", "-n", help="Adder width in bits", type=int)
        circuit.add_argument("--safa", "-s", help="SAFAs in the low positions of a hybrid RCA", type=int)
        circuit.add_argument(
            "--redundant", help="AO21 carry logic in the DAFAs (default)", action="store_true", default=None
        )
        circuit.add_argument(
            "--non-redundant", dest="redundant", help="OR2 carry logic in the DAFAs",
            action="store_false", default=None,
        )
        circuit.add_argument("--pairs", "-k", help="Rail pairs of a completion detector", type=int)
        circuit.add_argument(
            "--stage", help="Wrap the block with input register and completion detector",
            action="store_true", default=None,
        )

        delays = argparse.ArgumentParser(add_help=False)
        delays.add_argument("--delays", "-d", help="Delay table (YAML or JSON); unit delays when absent", type=str)

        output = argparse.ArgumentParser(add_help=False)
        output.add_argument("--output", "-o", help="Output file; stdout when absent", type=str)
        output.add_argument("--format", "-f", help="Report format", choices=ReportFormat.str_values())

        rand = argparse.ArgumentParser(add_help=False)
        rand.add_argument("--seed", help=f"Seed for all randomness (default {DEFAULT_SEED})", type=int)
        rand.add_argument("--count", help="Random vectors or trials to draw", type=int)

        circuits = Circuit.str_values()
        sub = parser.add_subparsers(dest="command", required=True, metavar="COMMAND")

        build = sub.add_parser(
            "build", help="Generate a netlist file and print its gate census",
            parents=[circuit, output], formatter_class=parser.formatter_class,
        )
        build.add_argument("circuit", choices=circuits, nargs="?")

        sim = sub.add_parser(
            "sim", help="Run 4-phase handshakes through a stage",
            parents=[circuit, delays, output, rand], formatter_class=parser.formatter_class,
        )
        sim.add_argument("circuit", choices=circuits, nargs="?")
        sim.add_argument("--vectors", help="Vector file: hex A, hex B, carry-in per line", type=str)
        sim.add_argument("--period", help="Minimum spacing of transaction starts", type=int)
        sim.add_argument("--max-skew", help="Maximum seeded arrival jitter per input pair", type=int)
        sim.add_argument("--vcd", help="Write a value change dump of the run", type=str)

        verify = sub.add_parser(
            "verify", help="Check an adder against the arithmetic oracle",
            parents=[circuit, delays, output, rand], formatter_class=parser.formatter_class,
        )
        verify.add_argument("circuit", choices=circuits, nargs="?")
        verify.add_argument("--mode", "-m", choices=VerifyMode.str_values())
        verify.add_argument("--workers", "-j", help="Worker processes (default: one per CPU)", type=int)

        sta = sub.add_parser(
            "sta", help="Critical forward path of a block or stage",
            parents=[circuit, delays, output], formatter_class=parser.formatter_class,
        )
        sta.add_argument("circuit", choices=circuits, nargs="?")
        sta.add_argument(
            "--no-register", dest="with_register", help="Time the bare block, without the input register",
            action="store_false", default=None,
        )

        compare = sub.add_parser(
            "compare", help="Latency of every adder legend against the baseline",
            parents=[delays, output], formatter_class=parser.formatter_class,
        )
        compare.add_argument(
            "--source", help="formula, practical (alias table2) or both",
            choices=["formula", "practical", "table2", "both"],
        )

        classify = sub.add_parser(
            "classify", help="Indication class of a function block",
            parents=[circuit, delays, output, rand], formatter_class=parser.formatter_class,
        )
        classify.add_argument("circuit", choices=circuits, nargs="?")

        sweep = sub.add_parser(
            "sweep", help="Hybrid RCA latency over every SAFA count",
            parents=[delays, output], formatter_class=parser.formatter_class,
        )
        sweep.add_argument("--width", "-n", help="Adder width in bits", type=int)
        return parser

    def _load_config(self):
        """Merge the --config file with the flags given on the command line"""
        data = {}
        if self.args.config:
            logging.info(f"Loading config from {self.args.config}")
            data = self._file_handler.read(self.args.config, file_type="yaml") or {}
            if not isinstance(data, dict):
                raise UsageError(f"{self.args.config} must hold a mapping of run options")
        flags = {k: v for k, v in vars(self.args).items() if v is not None and k not in ("config", "verbose")}
        try:
            self.config = RunConfig(**{**data, **flags})
        except ValidationError as e:
            raise UsageError(f"Invalid options: {e}") from e

    def _delays(self) -> DelayTable:
        if self.config.delays:
            logging.info(f"Loading delay table from {self.config.delays}")
            return DelayTable.load(self.config.delays)
        return DelayTable.uniform()

    def _function_block(self) -> Netlist:
        cfg = self.config
        if cfg.netlist:
            return Netlist.load(cfg.netlist)
        circuit = cfg.circuit or Circuit.RCA
        if circuit is Circuit.SAFA:
            return gen_safa()
        if circuit is Circuit.DAFA:
            return gen_dafa(cfg.redundant)
        if circuit is Circuit.DETECTOR:
            return gen_completion_detector(cfg.pairs)
        return gen_hybrid_rca(AdderSpec.for_width(cfg.width, cfg.safa, cfg.redundant))

    def _block_and_stage(self):
        fb = self._function_block()
        if fb.acks is not None and fb.acks.ackin:
            return fb, fb
        return fb, gen_stage(fb)

    def _emit(self, contents: str):
        """Report to --output, or to stdout"""
        if self.config.output:
            logging.info(f"Writing {self.config.output}")
            self._file_handler.write(self.config.output, contents)
        else:
            sys.stdout.write(contents)

    def _census_table(self, netlist: Netlist) -> Table:
        table = Table(title=f"{netlist.name}: {len(netlist.gates)} gates")
        table.add_column("kind")
        table.add_column("count", justify="right")
        for kind, count in gate_census(netlist).items():
            if count:
                table.add_row(kind.value, str(count))
        return table

    def cmd_build(self):
        netlist = self._function_block()
        if self.config.stage:
            netlist = gen_stage(netlist)
        report = validate(netlist)
        if not report.ok:
            for violation in report.violations:
                logging.error(f"{violation.kind.value}: {violation.message}")
            raise VerificationFailure(f"{netlist.name} failed structural validation")
        self.console.print(self._census_table(netlist))
        self._emit(netlist.dumps() + "\n")

    def cmd_sim(self):
        cfg = self.config
        fb, stage = self._block_and_stage()
        vectors = None
        if cfg.vectors:
            operands = parse_vector_text(self._file_handler.read(cfg.vectors, file_type="text"))
            vectors = adder_vectors(adder_width(fb), operands)
        delays = self._delays()
        run = run_protocol(
            stage, delays, vectors=vectors, seed=cfg.seed, count=cfg.draws,
            period=cfg.period, max_skew=cfg.max_skew, record=bool(cfg.vcd),
        )
        summary = run.summary
        table = Table(title=f"{stage.name} handshake run")
        table.add_column("metric")
        table.add_column("value", justify="right")
        for field, value in summary.model_dump().items():
            table.add_row(field, "-" if value is None else f"{value:g}" if isinstance(value, float) else str(value))
        self.console.print(table)
        if cfg.vcd:
            logging.info(f"Writing waveform to {cfg.vcd}")
            self._file_handler.write(cfg.vcd, render_vcd(run.logs, stage, delays.time_unit))
        self._emit(report_to_yaml(summary))
        if not summary.clean:
            raise VerificationFailure(f"{stage.name}: handshake monitors reported failures")

    def cmd_verify(self):
        cfg = self.config
        fb = self._function_block()
        delays = self._delays()
        failed = []
        equations = {Circuit.SAFA: SAFA_EQUATIONS, Circuit.DAFA: DAFA_EQUATIONS}.get(cfg.circuit)
        if equations is not None and not cfg.netlist:
            for check in (dsop_check(equations), monotonic_cover_check(equations)):
                if not check.ok:
                    failed.append(f"{equations.name} {type(check).__name__}")
            if not equation_equivalence(fb, equations, delays).ok:
                failed.append(f"{fb.name} does not implement the {equations.name} equations")

        width = adder_width(fb)
        mode = cfg.mode or (VerifyMode.EXHAUSTIVE if width <= 8 else VerifyMode.RANDOM)
        report = exhaustive_verify(
            fb, width, mode=mode, seed=cfg.seed, count=cfg.draws, delays=delays, workers=cfg.workers
        )
        logging.info(f"{fb.name}: {report.checked - report.failures}/{report.checked} vectors passed")
        self._emit(report_to_yaml(report))
        if not report.ok:
            failed.append(f"{report.failures} of {report.checked} vectors failed")
        if failed:
            raise VerificationFailure("; ".join(failed))

    def cmd_sta(self):
        cfg = self.config
        fb = self._function_block()
        netlist = fb
        if cfg.with_register and not (fb.acks and fb.acks.ackin) and fb.outputs:
            netlist = gen_stage(fb)
        result = critical_path(netlist, self._delays())

        table = Table(title=f"{netlist.name} critical path")
        table.add_column("latency", justify="right")
        table.add_column("expression")
        table.add_column("gates", justify="right")
        table.add_column("endpoint")
        table.add_row(str(result.value), str(result.expr), str(len(result.path)), result.endpoint or "-")
        self.console.print(table)

        if not cfg.netlist and (cfg.circuit or Circuit.RCA) is Circuit.RCA:
            spec = AdderSpec.for_width(cfg.width, cfg.safa, cfg.redundant)
            formulas = latency_expr_table()
            for name, known in CONFIGURATIONS.items():
                if known == spec:
                    agrees = formulas[name].same_gates(result.expr)
                    log = logging.info if agrees else logging.warning
                    log(f"{name} formula {formulas[name]} {'matches' if agrees else 'differs from'} the netlist")
        self._emit(report_to_yaml(result))

    def cmd_compare(self):
        cfg = self.config
        delays = self._delays()
        if cfg.source == "both":
            report = correlation_report(delays)
            self._emit(report_to_yaml(report))
            return
        report = compare_report(delays, ReportSource(cfg.source))
        table = Table(title=f"Latency against the baseline ({report.source.value}, {report.time_unit})")
        for column in ("legend", "description", "latency", "normalized", "reduction %"):
            table.add_column(column, justify="left" if column in ("legend", "description") else "right")
        for row in report.rows:
            table.add_row(
                row.legend, row.description, f"{row.latency:g}",
                f"{row.normalized:.4f}", f"{row.reduction_vs_adder11_percent:.1f}",
            )
        self.console.print(table)
        self._emit(report_to_csv(report) if cfg.format is ReportFormat.CSV else report_to_yaml(report))

    def cmd_classify(self):
        cfg = self.config
        fb = self._function_block()
        trials = cfg.count if cfg.count is not None else 2 * len(fb.inputs)
        report = classify_indication(fb, self._delays(), trials, cfg.seed)
        logging.info(
            f"{fb.name}: {report.classification.value} indication "
            f"({len(report.early_set)} early-set, {len(report.early_reset)} early-reset witnesses)"
        )
        self._emit(report_to_yaml(report))

    def cmd_sweep(self):
        cfg = self.config
        result = sweep_hybrid(cfg.width, self._delays())
        table = Table(title=f"{result.width}-bit hybrid RCA")
        for column in ("SAFA", "DAFA", "latency", "expression"):
            table.add_column(column, justify="left" if column == "expression" else "right")
        for point in result.points:
            marker = " *" if point.safa in result.argmin else ""
            table.add_row(str(point.safa), str(point.dafa), f"{point.latency}{marker}", str(point.expr))
        self.console.print(table)
        if cfg.format is ReportFormat.CSV:
            lines = ["safa,dafa,latency,expr"]
            lines += [f"{p.safa},{p.dafa},{p.latency},{p.expr}" for p in result.points]
            self._emit("\n".join(lines) + "\n")
        else:
            self._emit(report_to_yaml(result))

    def run(self):
        """Run the CLI"""
        if self.args.verbose:
            logging.getLogger().setLevel(logging.DEBUG)
        self._load_config()
        getattr(self, f"cmd_{self.config.command}")()


def main(argv: Optional[Sequence[str]] = None):
    try:
        Cli(argv).run()
    except CliError as e:
        logging.error(str(e))
        blocking = getattr(e, "blocking", None)
        if blocking:
            logging.error(f"Blocking nets: {', '.join(blocking)}")
        sys.exit(e.exit_code)


if __name__ == "__main__":
    main()
