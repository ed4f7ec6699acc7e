"""``hempss`` command-line interface.

Every subcommand reads one JSON config (``--config``) and writes CSV/JSON
either into ``--out`` or to standard output.  Exit status: 0 on success,
1 when a computation fails (constraint, convergence, truncation, ...),
2 on usage or config errors.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from . import _io
from .canonical import CanonicalBranch, CanonicalParams, detect_branch, validate
from .errors import HempssError
from .fock import FockCutoff
from .numerics import QuadratureConfig

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def _complex(value, name):
    if isinstance(value, (int, float)):
        return complex(value)
    if isinstance(value, (list, tuple)) and len(value) == 2:
        return complex(float(value[0]), float(value[1]))
    raise UsageError(f"{name} must be a number or a [re, im] pair")


def _params(cfg):
    if "params" not in cfg:
        raise UsageError("config needs a 'params' block")
    try:
        return CanonicalParams.from_dict(cfg["params"])
    except (TypeError, ValueError) as exc:
        raise UsageError(f"bad params block: {exc}") from exc


def _betas(cfg):
    if "beta1" in cfg or "beta2" in cfg:
        return _complex(cfg.get("beta1", 0.0), "beta1"), _complex(cfg.get("beta2", 0.0), "beta2")
    b = _complex(cfg.get("beta", 0.0), "beta")
    return b, b


def _quadrature(cfg):
    try:
        return QuadratureConfig.from_dict(cfg.get("quadrature", {}))
    except (TypeError, ValueError) as exc:
        raise UsageError(f"bad quadrature block: {exc}") from exc


def _cutoff(cfg, default=40):
    c = cfg.get("cutoff", default)
    if isinstance(c, int):
        return FockCutoff.square(c)
    if isinstance(c, list) and len(c) == 2:
        return FockCutoff(int(c[0]), int(c[1]))
    raise UsageError("cutoff must be an integer or [n1_max, n2_max]")


class Output:
    def __init__(self, out_dir):
        self.out_dir = out_dir
        if out_dir:
            os.makedirs(out_dir, exist_ok=True)

    def emit(self, name, text):
        if self.out_dir:
            with open(os.path.join(self.out_dir, name), "w", newline="\n", encoding="utf-8") as fh:
                fh.write(text)
        else:
            sys.stdout.write(text if text.endswith("\n") else text + "\n")


def cmd_validate(cfg, args, out):
    p = _params(cfg)
    report = validate(p, args.tol or 1e-10)
    if out.out_dir:
        out.emit("validation.json", _io.dumps17(report.to_dict()) + "\n")
    print(report.summary())
    return EXIT_OK if report.passed else EXIT_FAIL


def cmd_coeffs(cfg, args, out):
    from .hamiltonian import generic_coefficients, specialized_coefficients

    p = _params(cfg)
    validate_or_raise(p, args)
    doc = {"generic": generic_coefficients(p).to_dict(), "cross_kerr_factor": 4.0}
    if detect_branch(p) is CanonicalBranch.DeltaZero_ThetaPi:
        doc["specialized"] = specialized_coefficients(p).to_dict()
    out.emit("coeffs.json", _io.dumps17(doc) + "\n")
    return EXIT_OK


def validate_or_raise(p, args):
    from .canonical import require_canonical

    require_canonical(p, args.tol or 1e-10)


def _state_pnd(cfg, args):
    from .states import normalize, wave_params
    from .statistics import pnd, pnd_adaptive

    p = _params(cfg)
    validate_or_raise(p, args)
    b1, b2 = _betas(cfg)
    q = _quadrature(cfg)
    w = normalize(wave_params(p, b1, b2), q)
    if "n_max" in cfg:
        return p, b1, b2, pnd(w, p, int(cfg["n_max"]), q)
    return p, b1, b2, pnd_adaptive(w, p, q)


def cmd_pnd(cfg, args, out):
    _, _, _, g = _state_pnd(cfg, args)
    out.emit("pnd.csv", g.to_csv())
    print(f"n_max={g.n_max} total_mass={g.total_mass:.12g} convergence={g.convergence_estimate:.3e}",
          file=sys.stderr)
    return EXIT_OK


def _moment_row(p, b1, b2, g):
    from .statistics import SweepTable, moments

    m = moments(g)
    row = {
        "r": p.r, "phi": p.phi, "gamma_mod": p.gamma_mod, "chi_mod": p.chi_mod,
        "delta1": p.delta1, "delta2": p.delta2, "theta1": p.theta1, "theta2": p.theta2,
        "beta1_re": b1.real, "beta1_im": b1.imag, "beta2_re": b2.real, "beta2_im": b2.imag,
        "n_max": g.n_max, "total_mass": g.total_mass, "mean_n1": m.mean_n1, "mean_n2": m.mean_n2,
        "mean_n1n2": m.mean_n1n2, "g2": m.g2_cross, "error": "",
    }
    return SweepTable(rows=[row])


def cmd_moments(cfg, args, out):
    table = _moment_row(*_state_pnd(cfg, args))
    out.emit("moments.csv", table.to_csv())
    return EXIT_OK


def cmd_g2(cfg, args, out):
    from .statistics import PARAM_COLUMNS

    table = _moment_row(*_state_pnd(cfg, args))
    cols = PARAM_COLUMNS + ["g2"]
    out.emit("g2.csv", _io.csv_text(cols, [[r[c] for c in cols] for r in table.rows]))
    return EXIT_OK


def _finish_sweep(table, out):
    out.emit("moments.csv", table.to_csv())
    failed = len(table.rows) - len(table.ok_rows())
    if failed:
        print(f"{failed} of {len(table.rows)} grid points failed; see the error column", file=sys.stderr)
    return EXIT_OK if len(table.ok_rows()) else EXIT_FAIL


def cmd_sweep_gamma(cfg, args, out):
    from .statistics import sweep_gamma

    if "gamma_values" not in cfg:
        raise UsageError("sweep-gamma needs 'gamma_values'")
    table = sweep_gamma(_params(cfg), _betas(cfg), [float(g) for g in cfg["gamma_values"]],
                        _quadrature(cfg), threads=args.threads)
    return _finish_sweep(table, out)


def cmd_sweep_theta(cfg, args, out):
    from .statistics import sweep_theta

    if "theta1_grid" not in cfg or "theta2_grid" not in cfg:
        raise UsageError("sweep-theta needs 'theta1_grid' and 'theta2_grid'")
    table = sweep_theta(_params(cfg), _betas(cfg), [float(t) for t in cfg["theta1_grid"]],
                        [float(t) for t in cfg["theta2_grid"]], _quadrature(cfg), threads=args.threads)
    return _finish_sweep(table, out)


def cmd_state_eval(cfg, args, out):
    from .states import (eval_coordinate_wavefunction, eval_cubic_closed_form,
                         eval_entangled_wavefunction, normalize, wave_params)

    p = _params(cfg)
    validate_or_raise(p, args)
    b1, b2 = _betas(cfg)
    q = _quadrature(cfg)
    rep = cfg.get("representation", "entangled")
    if "points" not in cfg:
        raise UsageError("state-eval needs 'points' ([[u, v], ...])")
    pts = [(float(u), float(v)) for u, v in cfg["points"]]
    w = normalize(wave_params(p, b1, b2), q)
    rows = []
    if rep == "entangled":
        header = ["z1", "z2", "re_psi", "im_psi"]
        for u, v in pts:
            psi = eval_entangled_wavefunction(w, complex(u, v))
            rows.append([u, v, psi.real, psi.imag])
    elif rep in ("coordinate", "cubic"):
        header = ["x1", "x2", "re_psi", "im_psi"]
        for u, v in pts:
            if rep == "coordinate":
                psi = eval_coordinate_wavefunction(w, p, u, v, q)
            else:
                psi = eval_cubic_closed_form(p, b1, b2, u, v, norm=w.norm)
            rows.append([u, v, psi.real, psi.imag])
    else:
        raise UsageError("representation must be 'entangled', 'coordinate' or 'cubic'")
    out.emit("wavefunction.csv", _io.csv_text(header, rows))
    return EXIT_OK


def cmd_oracle_check(cfg, args, out):
    from .oracle import compare_pnd, joint_eigenstate, unitary_construction
    from .states import normalize, wave_params
    from .statistics import pnd

    p = _params(cfg)
    validate_or_raise(p, args)
    b1, b2 = _betas(cfg)
    cutoff = _cutoff(cfg)
    q = _quadrature(cfg)
    n_cmp = int(cfg.get("n_compare", 12))
    tol = args.tol or 1e-6
    eig = joint_eigenstate(p, b1, b2, cutoff)
    w = normalize(wave_params(p, b1, b2), q)
    g = pnd(w, p, n_cmp, q)
    diff = compare_pnd(eig, g)
    report = {
        "cutoff": cutoff.as_list(),
        "n_compare": n_cmp,
        "max_abs_pnd_difference": diff,
        "quadrature_mass": g.total_mass,
        "residual1": eig.residual1,
        "residual2": eig.residual2,
        "boundary_residual1": eig.boundary_residual1,
        "boundary_residual2": eig.boundary_residual2,
        "tol": tol,
    }
    if p.order == 2:
        uni = unitary_construction(p, b1, b2, cutoff, reference=eig)
        report["unitary_fidelity"] = uni.fidelity_vs_other_route
    passed = diff < tol
    report["passed"] = passed
    out.emit("oracle_check.json", _io.dumps17(report) + "\n")
    print(f"max |P_quadrature - P_oracle| = {diff:.3e} ({'PASS' if passed else 'FAIL'} at {tol:g})",
          file=sys.stderr)
    return EXIT_OK if passed else EXIT_FAIL


def _mode_freqs(cfg):
    try:
        return float(cfg["omega1"]), float(cfg["omega2"])
    except KeyError as exc:
        raise UsageError(f"config needs {exc.args[0]!r}") from exc


def _design(cfg):
    from .processes import pump_design_four_photon, pump_design_hempss

    w1, w2 = _mode_freqs(cfg)
    kind = cfg.get("design", "four_photon")
    fn = {"four_photon": pump_design_four_photon, "hempss": pump_design_hempss}.get(kind)
    if fn is None:
        raise UsageError("design must be 'four_photon' or 'hempss'")
    return fn(w1, w2, cfg.get("fractions"))


def cmd_design_pumps(cfg, args, out):
    out.emit("pumps.json", _design(cfg).to_json() + "\n")
    return EXIT_OK


def cmd_enumerate_terms(cfg, args, out):
    from .processes import Pump, enumerate_terms, terms_to_json

    w1, w2 = _mode_freqs(cfg)
    if "pumps" in cfg:
        pumps = [Pump(float(d["omega"]), d.get("wavevector"), _complex(d.get("amplitude", 1.0), "amplitude"))
                 for d in cfg["pumps"]]
    else:
        pumps = list(_design(cfg).pumps)
    orders = cfg.get("orders", [3, 4, 5])
    terms = enumerate_terms(orders, (w1, w2), pumps,
                            max_mode_exponent=int(cfg.get("max_mode_exponent", 4)),
                            tol=args.tol, include_kerr=bool(cfg.get("include_kerr", True)),
                            pairs=cfg.get("pairs"))
    out.emit("terms.json", terms_to_json(terms) + "\n")
    return EXIT_OK


COMMANDS = {
    "validate": (cmd_validate, "check the canonical constraints"),
    "coeffs": (cmd_coeffs, "four-photon Hamiltonian coefficients as JSON"),
    "pnd": (cmd_pnd, "photon-number distribution as pnd.csv"),
    "moments": (cmd_moments, "mean photon numbers and g2 as moments.csv"),
    "g2": (cmd_g2, "cross-mode g2 as g2.csv"),
    "sweep-gamma": (cmd_sweep_gamma, "moments against |gamma|"),
    "sweep-theta": (cmd_sweep_theta, "moments on a (theta1, theta2) grid"),
    "state-eval": (cmd_state_eval, "wavefunction values at given points"),
    "oracle-check": (cmd_oracle_check, "quadrature PND against the Fock-space eigenvector"),
    "design-pumps": (cmd_design_pumps, "pump frequency relations as JSON"),
    "enumerate-terms": (cmd_enumerate_terms, "energy-conserving process terms as JSON"),
}


def build_parser():
    parser = argparse.ArgumentParser(prog="hempss", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    for name, (_, help_text) in COMMANDS.items():
        sp = sub.add_parser(name, help=help_text)
        sp.add_argument("--config", required=True, help="JSON config file")
        sp.add_argument("--out", help="output directory (default: standard output)")
        sp.add_argument("--threads", type=int, default=1, help="worker threads for sweeps")
        sp.add_argument("--tol", type=float, default=None, help="tolerance override")
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.threads < 1:
        parser.error("--threads must be >= 1")
    try:
        with open(args.config, encoding="utf-8") as fh:
            cfg = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        print(f"hempss: cannot read config: {exc}", file=sys.stderr)
        return EXIT_USAGE
    if not isinstance(cfg, dict) or not cfg:
        print("hempss: config must be a non-empty JSON object", file=sys.stderr)
        return EXIT_USAGE
    fn = COMMANDS[args.command][0]
    try:
        return fn(cfg, args, Output(args.out))
    except UsageError as exc:
        print(f"hempss: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except HempssError as exc:
        print(f"hempss: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
