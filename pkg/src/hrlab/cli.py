"""Command-line front end.

Every subcommand builds a report dict, writes it as JSON (default) or CSV and
exits with 0 when all checks pass, 1 when a check fails, 2 on bad usage or
invalid parameters and 3 when the output cannot be written.
"""
from __future__ import annotations

import argparse
import math
import sys
import time
from dataclasses import replace

from . import report
from .barrier import LEMMAS, SpaceKind, assemble_test_function, certify_barrier, check_lemma, verify_admissible
from .errors import HRLabError, InvalidParams, NoAdmissibleQ, WrongRegime
from .spectral import Params, classify_regime, compute_spectral, critical_eta, eval_P, mu_star
from .stationary import Direction, build_pair, sup_g, verify_source_class

EXIT_OK, EXIT_CHECK, EXIT_USAGE, EXIT_IO = 0, 1, 2, 3

COMMANDS = ("exponents", "classify", "barrier-verify", "estimates", "stationary", "simulate", "sweep")
HISTORY_HEADER = ("t", "max_norm", "weighted_mass")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(f"{self.prog}: error: {message}")


# ---------------------------------------------------------------- flag parsing

def _mu_value(text: str):
    if text.strip().lower() == "star":
        return "star"
    try:
        return float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a number or 'star', got {text!r}") from None


def _p_value(text: str):
    if text.strip().lower() == "crit":
        return "crit"
    try:
        return float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a number or 'crit', got {text!r}") from None


def _float_list(text: str) -> list[float]:
    try:
        return [float(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from None


def _ladder(text: str) -> list[float]:
    """Comma list of R (or T) values; a leading 'e' gives the logarithm directly."""
    out = []
    for tok in text.split(","):
        tok = tok.strip()
        if not tok:
            continue
        try:
            if tok[0] in "eE":
                out.append(float(tok[1:]))
            else:
                v = float(tok)
                if not v > 1:
                    raise ValueError
                out.append(math.log(v))
        except (ValueError, IndexError):
            raise argparse.ArgumentTypeError(f"bad ladder entry {tok!r}; use values > 1 or eLOG") from None
    if len(out) < 2 and text.count(",") > 0:
        raise argparse.ArgumentTypeError("ladder needs at least two entries")
    return out


def _resolve(ns, need_p: bool = False) -> tuple[Params, dict]:
    """Turn flags into validated Params plus an echo of what was used."""
    N = ns.N
    mu = mu_star(N) if ns.mu == "star" else ns.mu
    echo = {"N": N, "mu": mu, "mu_flag": str(ns.mu), "sigma": ns.sigma}
    p = getattr(ns, "p", None)
    if p == "crit":
        pre = Params(N, mu, ns.sigma, 2.0)
        pre.validate()
        p = 1.0 + (ns.sigma + 4.0) / compute_spectral(N, mu).mu_N
        echo["p_flag"] = "crit"
    if p is None:
        if need_p:
            raise InvalidParams("--p is required for this command")
        # exponent-only commands still go through the Params rules
        Params(N, mu, ns.sigma, 2.0).validate()
        return None, echo
    eta = getattr(ns, "eta", None)
    params = Params(N, mu, ns.sigma, p, eta).validate()
    echo.update(p=p, eta=eta)
    return params, echo


# ------------------------------------------------------------------- commands

def cmd_exponents(ns):
    params, echo = _resolve(ns)
    spec = compute_spectral(echo["N"], echo["mu"])
    res = spec.as_dict()
    res["roots"] = list(spec.roots)
    res["P_at_roots"] = [float(eval_P(x, spec.N, spec.mu)) for x in spec.roots]
    res["p_crit"] = 1.0 + (echo["sigma"] + 4.0) / spec.mu_N
    if params is not None:
        res["eta_crit"] = critical_eta(params.p, params.sigma)
    tol = 1e-9 * (1.0 + spec.mu)
    checks = {"roots_are_zeros": all(abs(v) <= tol for v in res["P_at_roots"])}
    if not spec.degenerate:
        checks["root_order"] = spec.beta_minus < spec.alpha_minus < spec.alpha_plus < 0 < spec.beta_plus
        checks["c_mu_negative"] = spec.c_mu < 0
    else:
        checks["d_mu_star_positive"] = spec.d_mu_star > 0
    return echo, {}, res, checks


def cmd_classify(ns):
    params, echo = _resolve(ns, need_p=True)
    return echo, {}, classify_regime(params).as_dict(), {}


def cmd_barrier(ns):
    _, echo = _resolve(ns)
    spec = compute_spectral(echo["N"], echo["mu"])
    defaults = {"n_samples": 10_000, "r_max": 1e8, "t_max": 50.0}
    cert = certify_barrier(spec)
    checks = {f"barrier.{k}": v for k, v in cert.pop("checks").items()}
    cert.pop("ok")
    res = {"barrier": cert}
    if ns.T is not None or ns.R is not None:
        T = 100.0 if ns.T is None else ns.T
        R = 100.0 if ns.R is None else ns.R
        kind = SpaceKind(ns.kind)
        p = None if ns.p in (None, "crit") else ns.p
        if p is None and ns.ell is None:
            p = 1.0 + (echo["sigma"] + 4.0) / spec.mu_N
            defaults["p_for_ell"] = p
        tf = assemble_test_function(spec, kind, T, R, ell=ns.ell, p=p)
        adm = verify_admissible(tf)
        checks.update({f"test_function.{k}": v for k, v in adm.pop("checks").items()})
        adm.pop("ok")
        res["test_function"] = adm
        defaults.update(T=T, R=R, kind=kind.value)
    return echo, defaults, res, checks


def cmd_estimates(ns):
    params, echo = _resolve(ns, need_p=True)
    spec = compute_spectral(params.N, params.mu)
    lemmas = LEMMAS if ns.lemma == "all" else (ns.lemma,)
    rows, checks = [], {}
    for lem in lemmas:
        try:
            chk = check_lemma(lem, spec, params, log_ladder=ns.ladder, ell=ns.ell)
        except WrongRegime as exc:
            if ns.lemma != "all":
                raise
            rows.append({"lemma": lem, "skipped": str(exc)})
            continue
        rows.append(chk.as_dict())
        checks[f"lemma_{lem}"] = chk.passed
    return echo, {"ladder": "per-lemma default" if ns.ladder is None else "given"}, {"lemmas": rows}, checks


def cmd_stationary(ns):
    params, echo = _resolve(ns, need_p=True)
    spec = compute_spectral(params.N, params.mu)
    pair = build_pair(spec, params, q=ns.q, eps=ns.eps, eta=params.eta)
    cert = dict(pair.certificate)
    checks = {"positive_source": cert["worst_positivity_margin"] > 0}
    # grid doubling must not move eps0 by more than 0.1%
    e0_fine = (abs(pair.P_minus_q) / sup_g(spec, params, pair.V_q, pair.q, n_grid=20_000).sup) ** (1.0 / (params.p - 1.0))
    cert["eps0_doubled_grid"] = e0_fine
    cert["eps0_rel_change"] = abs(e0_fine - pair.eps0) / pair.eps0
    checks["eps0_grid_stable"] = cert["eps0_rel_change"] < 1e-3
    if params.eta is not None:
        checks["decay_bound"] = cert["worst_decay_ratio"] <= 1.0 + 1e-12
        cls = verify_source_class(pair.f_eps, params.eta, Direction.Upper)
        cert["source_class"] = {"direction": "Upper", "ok": cls.ok, "c": cls.c, "witness": cls.witness}
        checks["source_class_upper"] = cls.ok
    cert["u_eps_terms"] = [[t.coeff, t.lam, t.logpow] for t in pair.u_eps]
    return echo, {"eps": "eps0/2", "q": "interval midpoint", "n_samples": 10_000, "r_max": 1e8}, cert, checks


def _sim_config(ns):
    from .pde import SimConfig

    cfg = SimConfig()
    return replace(cfg, T_max=ns.Tmax if ns.Tmax is not None else cfg.T_max,
                   blow_threshold=ns.threshold if ns.threshold is not None else cfg.blow_threshold)


def cmd_simulate(ns):
    from .pde import BoundaryData, build_grid, simulate
    from .pde.sweep import bump_source, power_source

    params, echo = _resolve(ns, need_p=True)
    spec = compute_spectral(params.N, params.mu)
    grid = build_grid(ns.Rmax, ns.M)
    cfg = _sim_config(ns)
    f = u0 = bc = ref = None
    extra = {}
    if ns.source == "stationary" or ns.u0 == "stationary":
        pair = build_pair(spec, params, q=ns.q, eps=ns.eps)
        bc = BoundaryData.from_closed_form(pair.u_eps, params.N, ns.Rmax)
        ref = pair.u_eps
        extra = {"q": pair.q, "eps": pair.eps, "eps0": pair.eps0}
    if ns.source == "bump":
        f = bump_source(ns.amplitude)
    elif ns.source == "power":
        if params.eta is None:
            raise InvalidParams("--source power needs --eta")
        f = power_source(ns.amplitude, params.eta)
    elif ns.source == "stationary":
        f = pair.f_eps
    if ns.u0 == "stationary":
        u0 = pair.u_eps
    t0 = time.perf_counter()
    out = simulate(params, spec, grid, f=f, u0=u0, config=cfg, bc=bc, reference=ref)
    elapsed = time.perf_counter() - t0
    res = out.as_dict()
    res.update(extra)
    res["label"] = classify_regime(params).label.value
    defaults = {"Rmax": ns.Rmax, "M": ns.M, "Tmax": cfg.T_max, "threshold": cfg.blow_threshold,
                "source": ns.source, "amplitude": ns.amplitude, "u0": ns.u0,
                "dt0": cfg.initial_dt(grid), "dt_max": cfg.dt_max, "steady_tol": cfg.steady_tol}
    return echo, defaults, res, {}, {"history": out.history, "elapsed": elapsed}


def cmd_sweep(ns):
    from .pde import SweepConfig, sweep
    from .pde.sweep import CSV_HEADER

    base, echo = _resolve(ns, need_p=ns.axis != "p" or ns.p is not None)
    if base is None:
        base = Params(echo["N"], echo["mu"], echo["sigma"], 2.0, getattr(ns, "eta", None))
    cfg = SweepConfig(R_max=ns.Rmax, M=ns.M, sim=_sim_config(ns), source=ns.source,
                      amplitude=ns.amplitude, timing=ns.timing)
    rows = sweep(base, ns.axis, ns.values, cfg)
    res = {"axis": ns.axis, "header": list(CSV_HEADER), "rows": [r.as_tuple() for r in rows],
           "errors": {str(r.value): r.error for r in rows if r.error}}
    checks = {"no_errors": not any(r.outcome == "Error" for r in rows)}
    defaults = {"Rmax": ns.Rmax, "M": ns.M, "Tmax": cfg.sim.T_max, "threshold": cfg.sim.blow_threshold,
                "source": ns.source, "amplitude": ns.amplitude}
    return echo, defaults, res, checks, {"table": (CSV_HEADER, [r.as_tuple() for r in rows])}


HANDLERS = {
    "exponents": cmd_exponents,
    "classify": cmd_classify,
    "barrier-verify": cmd_barrier,
    "estimates": cmd_estimates,
    "stationary": cmd_stationary,
    "simulate": cmd_simulate,
    "sweep": cmd_sweep,
}


# --------------------------------------------------------------------- parser

def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="hrlab", description="Biharmonic heat equation with a Hardy-Rellich potential: "
                 "exponents, certificates, scaling fits and radial simulations.")
    sub = ap.add_subparsers(dest="command", metavar="COMMAND", parser_class=_Parser)
    sub.required = True

    def common(p, need_p=False, eta=False):
        p.add_argument("--N", type=int, default=5, help="dimension (default 5)")
        p.add_argument("--mu", type=_mu_value, default=1.0, help="potential strength or 'star' (default 1)")
        p.add_argument("--sigma", type=float, default=0.0, help="weight exponent (default 0)")
        p.add_argument("--p", type=_p_value, required=need_p, default=None,
                       help="nonlinearity exponent, or 'crit' for the critical one")
        if eta:
            p.add_argument("--eta", type=float, default=None, help="source decay exponent")
        p.add_argument("--out", default=None, help="output file (default stdout)")
        p.add_argument("--format", choices=("json", "csv"), default="json")
        p.add_argument("--timing", action="store_true", help="include wall-clock timings (breaks byte determinism)")

    def sim_flags(p):
        p.add_argument("--Rmax", type=float, default=100.0)
        p.add_argument("--M", type=int, default=1000)
        p.add_argument("--Tmax", type=float, default=None, help="final time (default 50)")
        p.add_argument("--threshold", type=float, default=None, help="blow-up threshold (default 1e12)")
        p.add_argument("--amplitude", type=float, default=0.3, help="source amplitude (default 0.3)")

    p = sub.add_parser("exponents", help="roots of the indicial polynomial and critical exponents")
    common(p)
    p = sub.add_parser("classify", help="existence/nonexistence label for (N, mu, sigma, p, eta)")
    common(p, need_p=True, eta=True)
    p = sub.add_parser("barrier-verify", help="certify the barrier H and optionally a test function")
    common(p)
    p.add_argument("--T", type=float, default=None)
    p.add_argument("--R", type=float, default=None)
    p.add_argument("--ell", type=int, default=None)
    p.add_argument("--kind", choices=[k.value for k in SpaceKind], default="FirstKind",
                   help="space cutoff family (FirstKind uses xi, SecondKind uses zeta)")
    p = sub.add_parser("estimates", help="log-log scaling fits of the integral estimates")
    common(p, need_p=True)
    p.add_argument("--lemma", choices=(*LEMMAS, "all"), default="all")
    p.add_argument("--ladder", type=_ladder, default=None,
                   help="comma list of R (T for 3.7) values; 'e100' means ln R = 100")
    p.add_argument("--ell", type=int, default=None)
    p = sub.add_parser("stationary", help="explicit stationary pair and its positivity certificate")
    common(p, need_p=True, eta=True)
    p.add_argument("--q", type=float, default=None)
    p.add_argument("--eps", type=float, default=None)
    p = sub.add_parser("simulate", help="one radial simulation")
    common(p, need_p=True, eta=True)
    sim_flags(p)
    p.add_argument("--source", choices=("bump", "power", "stationary", "zero"), default="bump")
    p.add_argument("--u0", choices=("zero", "stationary"), default="zero")
    p.add_argument("--q", type=float, default=None)
    p.add_argument("--eps", type=float, default=None)
    p.add_argument("--history", default=None, help="also write the t,max_norm,weighted_mass history CSV here")
    p = sub.add_parser("sweep", help="outcomes over a sorted list of p, eta or mu values")
    common(p, eta=True)
    sim_flags(p)
    p.add_argument("--axis", choices=("p", "eta", "mu"), required=True)
    p.add_argument("--values", type=_float_list, required=True, help="sorted comma-separated values")
    p.add_argument("--source", choices=("bump", "power", "auto"), default="bump")
    return ap


# ---------------------------------------------------------------------- output

def _render(ns, rep: dict, extra: dict) -> str:
    if ns.format == "json":
        return report.dumps_json(rep)
    if ns.command == "sweep":
        header, rows = extra["table"]
        return report.dumps_csv(header, rows)
    if ns.command == "simulate":
        return report.dumps_csv(HISTORY_HEADER, extra["history"])
    return report.dumps_csv(("key", "value"), report.flatten(rep))


def _emit(text: str, path: str | None):
    if path is None:
        sys.stdout.write(text)
        sys.stdout.flush()
        return
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(text)


def run(argv=None) -> int:
    parser = build_parser()
    try:
        ns = parser.parse_args(argv)
    except UsageError as exc:
        print(str(exc), file=sys.stderr)
        return EXIT_USAGE
    except SystemExit as exc:  # --help
        return EXIT_OK if exc.code in (0, None) else EXIT_USAGE

    t0 = time.perf_counter()
    try:
        out = HANDLERS[ns.command](ns)
    except (InvalidParams, WrongRegime, NoAdmissibleQ, ValueError) as exc:
        print(f"hrlab {ns.command}: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except HRLabError as exc:
        # numerical failures are reported as failed checks
        out = ({"N": ns.N, "mu_flag": str(ns.mu)}, {}, {"error": type(exc).__name__, "message": str(exc)},
               {"completed": False})
    echo, defaults, res, checks = out[:4]
    extra = out[4] if len(out) > 4 else {}
    ok = all(checks.values())
    rep = {"command": ns.command, "params": echo, "defaults": defaults, "result": res,
           "checks": checks, "ok": ok}
    if ns.timing:
        rep["timing_s"] = time.perf_counter() - t0
    text = _render(ns, rep, extra)
    try:
        _emit(text, ns.out)
        if ns.command == "simulate" and ns.history:
            _emit(report.dumps_csv(HISTORY_HEADER, extra["history"]), ns.history)
    except OSError as exc:
        print(f"hrlab: cannot write output: {exc}", file=sys.stderr)
        return EXIT_IO
    return EXIT_OK if ok else EXIT_CHECK


def main(argv=None):
    sys.exit(run(argv))


if __name__ == "__main__":
    main()
