"""
Tunneling Lifetime - Interface de linha de comando
Subcomandos: lifetime, sweep, oracle, validate
"""
import argparse
import json
import logging
import sys
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path
from typing import Any, Callable, Dict, List, Optional, Sequence

import pandas as pd
from pydantic import ValidationError

from config import ACCEPTANCE, LOG_DIR, LOG_LEVEL, LOG_TO_FILE, SWEEP_DEFAULTS, THREADS, VALIDATION_GRID
from data.exporter import (
    render_rows,
    write_curve,
    write_json,
    write_manifest,
    write_rows,
    write_svg,
    write_text_atomic,
)
from data.models import (
    AlphaSchedule,
    FDConfig,
    MomentResult,
    PotentialSpec,
    QuadratureConfig,
    RunManifest,
    SweepRow,
    TimeGridConfig,
)
from oracles.regularized import validate_potential
from oracles.timedomain import decay_curve, moments_time_domain
from physics.moments import energy_sum_rule, lifetime
from runner.sweep import SweepEngine, sweep_grid, upturn_at_onset
from utils.errors import TunnelingError
from utils.logging_setup import setup_logging

logger = logging.getLogger(__name__)

# =============================================================================
# 🚨 ÂNCORA: CLI_PARSER - Flags comuns + subcomandos
# Contexto: Flags numéricas omitidas usam os defaults de config.py
# Cuidado: Erros de argparse saem com código 2 (contrato externo)
# Dependências: main()
# =============================================================================

def _float_list(text: str) -> List[float]:
    try:
        return [float(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated floats, got {text!r}")


def _common_flags() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--a", type=float, default=1.0, help="Largura do poço (default 1)")
    common.add_argument("--kmax", type=float, help="Corte adimensional em k*a (default 40pi)")
    common.add_argument("--rel-tol", type=float, help="Tolerância relativa das quadraturas")
    common.add_argument("--fd-h0", type=float, help="Passo base das diferenças finitas")
    common.add_argument("--tmax", type=float, help="Janela do oráculo em unidades de t0")
    common.add_argument("--alphas", type=_float_list, help="Sequência de alphas, ex. 0.2,0.1,0.05,0.025")
    common.add_argument("--out", type=Path, help="Arquivo de saída (default stdout)")
    common.add_argument("--format", choices=("csv", "json"), default="csv", help="Formato da saída")
    common.add_argument("--svg", type=Path, help="Gráfico tau_bar x <e> (sweep)")
    common.add_argument("--manifest", type=Path, help="Salva o manifesto da execução")
    common.add_argument("--threads", type=int, default=THREADS, help="Threads para linhas independentes")
    common.add_argument("--log-level", default=LOG_LEVEL, help="DEBUG, INFO, WARNING...")
    return common


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="tunneling",
        description="Tempo de vida de tunelamento pela barreira centrífuga l=1",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    common = _common_flags()

    p = sub.add_parser("lifetime", parents=[common], help="Tempo de vida de um potencial")
    p.add_argument("--v0", type=float, required=True, help="Profundidade do poço (<= 0)")

    p = sub.add_parser("sweep", parents=[common], help="Curva tau_bar x <e> em v0*a^2")
    p.add_argument("--v0a2-min", type=float, help="Início da grade (default -12)")
    p.add_argument("--v0a2-max", type=float, help="Fim da grade (default 0)")
    p.add_argument("--step", type=float, help="Passo da grade (default 0.25)")

    p = sub.add_parser("oracle", parents=[common], help="Comparação com o domínio do tempo")
    p.add_argument("--v0", type=float, required=True, help="Profundidade do poço (<= 0)")
    p.add_argument("--curve", type=Path, help="Salva a curva dP(t) em CSV")

    p = sub.add_parser("validate", parents=[common], help="Caminho regularizado alpha -> 0")
    p.add_argument("--v0", type=float, help="Valida só este potencial")
    p.add_argument("--grid", type=_float_list, help="Valores de v0*a^2 (default 0,-2,-4,-8,-16)")
    p.add_argument("--check-imaginary", action="store_true", help="Calcula também Im D(alpha)")
    return parser


def _configs(args: argparse.Namespace):
    """Quadratura e diferenças finitas só com as flags fornecidas"""
    quad: Dict[str, Any] = {}
    if args.kmax is not None:
        quad["k_max"] = args.kmax
    if args.rel_tol is not None:
        quad["rel_tol"] = args.rel_tol
    fd = {"h0": args.fd_h0} if args.fd_h0 is not None else {}
    return QuadratureConfig(**quad), FDConfig(**fd)


def _time_grid(args: argparse.Namespace) -> TimeGridConfig:
    return TimeGridConfig(**({"t_max": args.tmax} if args.tmax is not None else {}))


def _alpha_schedule(args: argparse.Namespace) -> AlphaSchedule:
    return AlphaSchedule(**({"alphas": tuple(args.alphas)} if args.alphas is not None else {}))


def _emit(text: str, out: Optional[Path]) -> None:
    if out is None:
        sys.stdout.write(text)
    else:
        write_text_atomic(out, text)
        logger.info(f"💾 Saída salva em {out}")


def _frame_text(records: Sequence[Dict[str, Any]]) -> str:
    return pd.DataFrame(list(records)).to_csv(index=False, lineterminator="\n")

# =============================================================================
# 🚨 ÂNCORA: COMMANDS - Implementação dos subcomandos
# Contexto: Cada comando devolve o exit code (0 ok, 1 falha numérica)
# Cuidado: stdout só recebe o artefato; mensagens vão para o log (stderr)
# Dependências: main()
# =============================================================================

def _sum_rules(spec: PotentialSpec, cfg: QuadratureConfig, result: MomentResult) -> Dict[str, Any]:
    """Diagnóstico da regra de energia; falha dela não derruba o lifetime"""
    rules: Dict[str, Any] = {"norm": result.norm, "energy_expected": result.energy}
    try:
        energy_rule = energy_sum_rule(spec, cfg)
    except TunnelingError as e:
        logger.warning(f"⚠️  Regra de energia indisponível para {spec}: {type(e).__name__}: {e}")
        rules.update(energy_integral=None, energy_rel_diff=None,
                     energy_error={"error": type(e).__name__, "message": str(e)})
        return rules
    rules["energy_integral"] = energy_rule.value
    rules["energy_rel_diff"] = abs(energy_rule.value / result.energy - 1.0) if result.energy else None
    return rules


def cmd_lifetime(args: argparse.Namespace) -> int:
    cfg, fd = _configs(args)
    spec = PotentialSpec(a=args.a, v0=args.v0)
    manifest = RunManifest(command="lifetime", spec_range={"a": spec.a, "v0": spec.v0},
                           quadrature=cfg, fd=fd, threads=1)

    result = lifetime(spec, cfg, fd)

    if args.format == "json":
        payload = {
            "result": result.summary(),
            "sum_rules": _sum_rules(spec, cfg, result),
            "manifest": manifest.model_dump(mode="json"),
        }
        _emit(json.dumps(payload, indent=2, default=str) + "\n", args.out)
    else:
        _emit(render_rows([SweepRow.from_result(spec.v0a2, result)], "csv"), args.out)

    if args.manifest:
        write_manifest(args.manifest, manifest)
    logger.info(f"📊 t2_rel_error={result.t2_rel_error:.2e} norm={result.norm:.9f} deficit={result.deficit:.3g}")
    return 0


def cmd_sweep(args: argparse.Namespace) -> int:
    cfg, fd = _configs(args)
    lo = args.v0a2_min if args.v0a2_min is not None else SWEEP_DEFAULTS["v0a2_min"]
    hi = args.v0a2_max if args.v0a2_max is not None else SWEEP_DEFAULTS["v0a2_max"]
    step = args.step if args.step is not None else SWEEP_DEFAULTS["step"]
    grid = sweep_grid(lo, hi, step)

    manifest = RunManifest(
        command="sweep",
        spec_range={"a": args.a, "v0a2_min": lo, "v0a2_max": hi, "step": step},
        quadrature=cfg, fd=fd, threads=args.threads,
    )
    rows = SweepEngine(cfg, fd, a=args.a, threads=args.threads).run(grid)

    embedded = manifest if args.format == "json" else None
    if args.out:
        write_rows(args.out, rows, args.format, embedded)
    else:
        sys.stdout.write(render_rows(rows, args.format, embedded))
    if args.svg:
        upturn = upturn_at_onset(rows)
        write_svg(args.svg, rows, onset=upturn.onset_e if upturn else None)
    if args.manifest:
        write_manifest(args.manifest, manifest)

    failed = [r for r in rows if not r.ok]
    if failed:
        print(json.dumps({"error": "RowFailures",
                          "message": f"{len(failed)} of {len(rows)} rows failed",
                          "v0a2": [r.v0a2 for r in failed]}), file=sys.stderr)
        return 1
    return 0


def cmd_oracle(args: argparse.Namespace) -> int:
    cfg, fd = _configs(args)
    grid = _time_grid(args)
    grid.check_against(cfg)
    spec = PotentialSpec(a=args.a, v0=args.v0)

    single = lifetime(spec, cfg, fd)
    curve = decay_curve(spec, grid)
    if args.curve:
        write_curve(args.curve, curve[0], spec.t0, curve[1])
    td = moments_time_domain(spec, grid, curve)

    pairs = [
        ("num", single.numerator, td.num),
        ("den", single.denominator, td.den),
        ("tau_bar", single.tau_bar, td.tau_bar),
    ]
    table = [{"quantity": name, "moment_method": ref, "time_domain": other,
              "rel_diff": abs(other / ref - 1.0),
              "agreement_pct": 100.0 * (1.0 - abs(other / ref - 1.0))}
             for name, ref, other in pairs]
    passed = (all(r["rel_diff"] < ACCEPTANCE["oracle_rel"] for r in table)
              and td.tail_bound < ACCEPTANCE["oracle_tail"])

    if args.format == "json":
        manifest = RunManifest(command="oracle", spec_range={"a": spec.a, "v0": spec.v0},
                               quadrature=cfg, fd=fd, time_grid=grid, threads=1)
        payload = {
            "comparison": table,
            "tail_bound": td.tail_bound,
            "decay_rate": td.rate,
            "delta_p0": td.delta_p0,
            "t_mean": td.t_mean,
            "exp_likeness": td.exp_likeness,
            "status": "PASS" if passed else "FAIL",
            "manifest": manifest.model_dump(mode="json"),
        }
        _emit(json.dumps(payload, indent=2) + "\n", args.out)
    else:
        _emit(_frame_text(table), args.out)

    logger.info(f"{'✅' if passed else '❌'} Oráculo: cauda={td.tail_bound:.2e} "
                f"dP(0)={td.delta_p0:.6f} t_bar/<t>={td.exp_likeness:.4f}")
    return 0 if passed else 1


def cmd_validate(args: argparse.Namespace) -> int:
    cfg, fd = _configs(args)
    schedule = _alpha_schedule(args)
    if args.v0 is not None:
        specs = [PotentialSpec(a=args.a, v0=args.v0)]
    else:
        grid = args.grid if args.grid is not None else list(VALIDATION_GRID)
        specs = [PotentialSpec.from_v0a2(v, a=args.a) for v in grid]

    def run_one(spec: PotentialSpec) -> Dict[str, Any]:
        try:
            return validate_potential(spec, schedule, cfg, fd, args.check_imaginary).to_dict()
        except TunnelingError as e:
            logger.error(f"❌ Validação {spec} falhou: {type(e).__name__}: {e}")
            return {"v0a2": spec.v0a2, "a": spec.a, "status": "ERROR",
                    "error": type(e).__name__, "message": str(e)}

    with ThreadPoolExecutor(max_workers=max(1, args.threads)) as pool:
        reports = list(pool.map(run_one, specs))
    passed = all(r["status"] == "PASS" for r in reports)

    if args.format == "json":
        manifest = RunManifest(command="validate",
                               spec_range={"a": args.a, "grid": [s.v0a2 for s in specs]},
                               quadrature=cfg, fd=fd, alpha_schedule=schedule, threads=args.threads)
        payload = {"reports": reports, "passed": passed, "manifest": manifest.model_dump(mode="json")}
        if args.out:
            write_json(args.out, payload)
        else:
            sys.stdout.write(json.dumps(payload, indent=2, default=str) + "\n")
    else:
        columns = ["v0a2", "d_single", "d_extrapolated", "d_rel_diff",
                   "n_single", "n_extrapolated", "n_rel_diff", "status"]
        _emit(_frame_text([{c: r.get(c) for c in columns} for r in reports]), args.out)

    logger.info(f"{'✅ PASS' if passed else '❌ FAIL'}: {sum(r['status'] == 'PASS' for r in reports)}"
                f"/{len(reports)} potenciais")
    return 0 if passed else 1


COMMANDS: Dict[str, Callable[[argparse.Namespace], int]] = {
    "lifetime": cmd_lifetime,
    "sweep": cmd_sweep,
    "oracle": cmd_oracle,
    "validate": cmd_validate,
}

# =============================================================================
# 🚨 ÂNCORA: MAIN - Ponto de entrada e mapeamento de exit codes
# Contexto: 0 sucesso, 1 falha numérica (JSON no stderr), 2 uso/configuração
# Cuidado: main(argv) não chama sys.exit, para ser testável em processo
# Dependências: __main__, testes do CLI
# =============================================================================

def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code) if isinstance(e.code, int) else 2

    setup_logging(args.log_level, LOG_DIR, LOG_TO_FILE)
    try:
        return COMMANDS[args.command](args)
    except (ValidationError, ValueError) as e:
        print(json.dumps({"error": type(e).__name__, "message": str(e)}), file=sys.stderr)
        return 2
    except TunnelingError as e:
        logger.error(f"❌ {type(e).__name__}: {e}")
        print(json.dumps({"error": type(e).__name__, "message": str(e)}), file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
