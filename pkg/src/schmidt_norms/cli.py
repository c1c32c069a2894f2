"""Command-line front end.

Every invocation prints a single JSON report to stdout and a one-line human
summary to stderr.  Exit codes: 0 = computed, 1 = input error, 2 = a
certificate of violation was produced (refutation or detection).  Reports
with identical inputs, parameters, and version are byte-identical except for
the runtime_ms field; the default seed comes from SCHMIDT_NORMS_SEED.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import os
import sys
import time

import numpy as np

from . import __version__
from .cones import k_block_positivity, sn_upper_verify, witness_check
from .linalg import BipartiteOperator, Frame, PureState, trace_norm
from .maps import (
    detection_map,
    hermitian_trace_norm,
    idk_apply,
    idk_op_norm,
    k_peb_certify,
    k_peb_refute,
    k_positivity,
    sn_contraction_test,
)
from .matio import (
    FormatError,
    dump_bipartite,
    load_bipartite,
    load_ensemble,
    load_map,
    read_json,
    write_json,
)
from .norms import (
    SeeSawConfig,
    maxk_space_norm_bounds,
    min_order_norm,
    omin_norm,
    sk_norm,
)
from .oracle import (
    OracleConfig,
    brute_block_min,
    brute_idk_norm,
    brute_min_order,
    brute_omin,
    brute_sk_norm,
)
from .rand import RandomConfig
from . import fixtures as fixture_mod

RECHECK_TOL = 1e-6


class _CliError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    # input errors must exit 1, not argparse's default 2
    def error(self, message):
        raise _CliError(message)


def _digest(path: str) -> dict:
    try:
        with open(path, "rb") as fh:
            data = fh.read()
    except OSError as exc:
        raise _CliError("cannot read %r: %s" % (path, exc))
    return {"path": path, "sha256": hashlib.sha256(data).hexdigest()}


def _seed(args) -> int:
    if args.seed is not None:
        return args.seed
    env = os.environ.get("SCHMIDT_NORMS_SEED")
    if env is not None:
        try:
            return int(env)
        except ValueError:
            raise _CliError("SCHMIDT_NORMS_SEED must be an integer, got %r" % env)
    return 0


def _seesaw_cfg(args) -> SeeSawConfig:
    return SeeSawConfig(restarts=args.restarts, max_iters=args.max_iters,
                        obj_tol=args.tol, rng=RandomConfig(seed=_seed(args)),
                        threads=args.threads)


def _oracle_cfg(args) -> OracleConfig:
    return OracleConfig(samples=args.samples, polish_steps=args.polish_steps,
                        rng=RandomConfig(seed=_seed(args)))


def _dump_vector(state: PureState) -> dict:
    return {"m": int(state.dims[0]), "n": int(state.dims[1]),
            "re": state.amplitudes.real.tolist(),
            "im": state.amplitudes.imag.tolist()}


def _load_vector(obj: dict) -> PureState:
    amp = np.asarray(obj["re"], dtype=float) + 1j * np.asarray(obj["im"], dtype=float)
    return PureState((int(obj["m"]), int(obj["n"])), amp)


def _dump_frame(frame: Frame | None) -> dict | None:
    if frame is None:
        return None
    return {"n": int(frame.n), "k": int(frame.k),
            "re": frame.vectors.real.tolist(),
            "im": frame.vectors.imag.tolist()}


def _dump_estimate(est) -> dict:
    out = {"value": est.value, "direction": est.direction,
           "converged": bool(est.converged),
           "restarts_used": int(est.restarts_used),
           "iterations": int(est.iterations)}
    if est.witness is not None:
        out["witness"] = {
            "vectors": [_dump_vector(v) for v in est.witness.vectors],
            "frame": _dump_frame(est.witness.frame),
        }
    return out


def _dump_verdict(verdict) -> dict:
    out = {"status": verdict.status, "min_value": verdict.min_value,
           "k": int(verdict.k)}
    if verdict.witness_vector is not None:
        out["witness_vector"] = _dump_vector(verdict.witness_vector)
    return out


# ---------------------------------------------------------------------------
# subcommand handlers: each returns (inputs, parameters, result, exit_code)
# ---------------------------------------------------------------------------


def _seesaw_params(args) -> dict:
    return {"k": args.k, "seed": _seed(args), "restarts": args.restarts,
            "max_iters": args.max_iters, "tol": args.tol,
            "threads": args.threads}


def _handle_norm(args):
    inputs = {"file": _digest(args.file)}
    op = load_bipartite(read_json(args.file))
    cfg = _seesaw_cfg(args)
    params = _seesaw_params(args)
    if args.variant == "sk":
        est = sk_norm(op, args.k, cfg)
        return inputs, params, _dump_estimate(est), 0
    if args.variant == "omin":
        est = omin_norm(op, args.k, cfg)
        return inputs, params, _dump_estimate(est), 0
    if args.variant == "minorder":
        est = min_order_norm(op, args.k, cfg)
        return inputs, params, _dump_estimate(est), 0
    lower, upper = maxk_space_norm_bounds(op, args.k, cfg)
    result = {"lower": _dump_estimate(lower), "upper": _dump_estimate(upper)}
    return inputs, params, result, 0


def _handle_cone_blockpos(args):
    inputs = {"file": _digest(args.file)}
    op = load_bipartite(read_json(args.file))
    verdict = k_block_positivity(op, args.k, _seesaw_cfg(args))
    code = 2 if verdict.status == "refuted" else 0
    return inputs, _seesaw_params(args), _dump_verdict(verdict), code


def _handle_cone_witness(args):
    inputs = {"witness": _digest(args.witness), "state": _digest(args.state)}
    w = load_bipartite(read_json(args.witness))
    rho = load_bipartite(read_json(args.state))
    cert = witness_check(w, rho, args.k, _seesaw_cfg(args))
    result = {"pairing": cert.pairing, "k": int(cert.k),
              "valid": bool(cert.valid),
              "sn_lower_bound": cert.k + 1 if cert.valid else None,
              "block_pos_evidence": _dump_verdict(cert.block_pos_evidence)}
    return inputs, _seesaw_params(args), result, 2 if cert.valid else 0


def _handle_cone_verify_sn(args):
    inputs = {"state": _digest(args.state), "ensemble": _digest(args.ensemble)}
    rho = load_bipartite(read_json(args.state))
    ens = load_ensemble(read_json(args.ensemble))
    ok = sn_upper_verify(rho, ens)
    result = {"verified": bool(ok), "k": int(ens.k)}
    return inputs, {}, result, 0


def _handle_map(args):
    cfg = _seesaw_cfg(args)
    params = _seesaw_params(args)
    if args.variant == "detect":
        inputs = {"state": _digest(args.state), "map": _digest(args.map)}
        rho = load_bipartite(read_json(args.state))
        psi = load_map(read_json(args.map))
        det = detection_map(psi, cfg)
        res = sn_contraction_test(rho, det, args.k, cfg)
        result = {"status": res.status, "trace_norm_value": res.trace_norm_value,
                  "k": int(res.k), "norm_bound": res.norm_bound,
                  "sn_lower_bound": res.sn_lower_bound}
        return inputs, params, result, 2 if res.detected else 0

    inputs = {"file": _digest(args.file)}
    phi = load_map(read_json(args.file))
    if args.variant == "kpos":
        verdict = k_positivity(phi, args.k, cfg)
        code = 2 if verdict.status == "refuted" else 0
        return inputs, params, _dump_verdict(verdict), code
    if args.variant == "kpeb":
        if args.ensemble is not None:
            inputs["ensemble"] = _digest(args.ensemble)
            ens = load_ensemble(read_json(args.ensemble))
            ok = k_peb_certify(phi, ens)
            return inputs, params, {"certified": bool(ok), "k": int(ens.k)}, 0
        cert = k_peb_refute(phi, args.k, cfg)
        result = {"pairing": cert.pairing, "k": int(cert.k),
                  "valid": bool(cert.valid),
                  "witness_operator": dump_bipartite(cert.W),
                  "block_pos_evidence": _dump_verdict(cert.block_pos_evidence)}
        return inputs, params, result, 2 if cert.valid else 0
    if args.variant == "idk-norm":
        est = idk_op_norm(phi, args.k, cfg)
        result = {"value": est.value, "direction": est.direction,
                  "converged": bool(est.converged),
                  "restarts_used": int(est.restarts_used),
                  "iterations": int(est.iterations)}
        return inputs, params, result, 0
    est = hermitian_trace_norm(phi, args.k, cfg)
    result = {"value": est.value, "direction": est.direction,
              "converged": bool(est.converged),
              "restarts_used": int(est.restarts_used),
              "iterations": int(est.iterations),
              "attaining_input": _dump_vector(est.attaining_input)}
    return inputs, params, result, 0


def _handle_oracle(args):
    params = {"k": args.k, "seed": _seed(args), "samples": args.samples,
              "polish_steps": args.polish_steps}
    cfg = _oracle_cfg(args)
    inputs = {"file": _digest(args.file)}
    if args.variant == "idk":
        value = brute_idk_norm(load_map(read_json(args.file)), args.k, cfg)
    else:
        op = load_bipartite(read_json(args.file))
        fn = {"sk": brute_sk_norm, "blockmin": brute_block_min,
              "minorder": brute_min_order, "omin": brute_omin}[args.variant]
        value = fn(op, args.k, cfg)
    return inputs, params, {"value": value}, 0


def _recheck_blockpos(report: dict, args):
    if args.file is None:
        raise _CliError("recheck of %r needs --file" % report["command"])
    obj = read_json(args.file)
    mat = load_map(obj).choi.mat if report["command"] == "map kpos" \
        else load_bipartite(obj).mat
    wit = _load_vector(report["result"]["witness_vector"])
    value = float(np.real(wit.amplitudes.conj() @ mat @ wit.amplitudes))
    return value, report["result"]["min_value"], {"file": _digest(args.file)}


def _recheck_witness(report: dict, args):
    if args.witness is None or args.state is None:
        raise _CliError("recheck of 'cone witness' needs --witness and --state")
    w = load_bipartite(read_json(args.witness))
    rho = load_bipartite(read_json(args.state))
    value = float(np.trace(w.mat @ rho.mat).real)
    inputs = {"witness": _digest(args.witness), "state": _digest(args.state)}
    return value, report["result"]["pairing"], inputs


def _recheck_kpeb(report: dict, args):
    if args.map is None:
        raise _CliError("recheck of 'map kpeb' needs --map")
    phi = load_map(read_json(args.map))
    rho = phi.choi.mat / float(np.trace(phi.choi.mat).real)
    w = load_bipartite(report["result"]["witness_operator"])
    value = float(np.trace(w.mat @ rho).real)
    return value, report["result"]["pairing"], {"map": _digest(args.map)}


def _recheck_detect(report: dict, args):
    if args.map is None or args.state is None:
        raise _CliError("recheck of 'map detect' needs --map and --state")
    psi = load_map(read_json(args.map))
    rho = load_bipartite(read_json(args.state))
    p = report["parameters"]
    cfg = SeeSawConfig(restarts=p["restarts"], max_iters=p["max_iters"],
                       obj_tol=p["tol"], rng=RandomConfig(seed=p["seed"]))
    det = detection_map(psi, cfg)
    value = trace_norm(idk_apply(det, rho.mat, rho.m))
    inputs = {"map": _digest(args.map), "state": _digest(args.state)}
    return value, report["result"]["trace_norm_value"], inputs


def _handle_oracle_recheck(args):
    report = read_json(args.report)
    if "command" not in report or "result" not in report:
        raise _CliError("--report file is not a tool report")
    handlers = {"cone blockpos": _recheck_blockpos, "map kpos": _recheck_blockpos,
                "cone witness": _recheck_witness, "map kpeb": _recheck_kpeb,
                "map detect": _recheck_detect}
    if report["command"] not in handlers:
        raise _CliError("cannot recheck reports of %r" % report["command"])
    try:
        value, reference, inputs = handlers[report["command"]](report, args)
    except KeyError as exc:
        raise _CliError("report is missing field %s" % exc)
    inputs["report"] = _digest(args.report)
    diff = abs(value - reference)
    result = {"recheck_value": value, "reference": reference,
              "difference": diff, "match": bool(diff <= RECHECK_TOL)}
    return inputs, {"tolerance": RECHECK_TOL}, result, 0 if diff <= RECHECK_TOL else 1


def _handle_fixtures(args):
    if args.name == "example51":
        obj = dump_bipartite(fixture_mod.example51(args.n))
    elif args.name == "swap":
        obj = dump_bipartite(fixture_mod.swap_operator(args.n))
    else:
        if args.fidelity is None:
            raise _CliError("fixtures emit isotropic needs --fidelity")
        obj = dump_bipartite(fixture_mod.isotropic(args.fidelity, args.n))
    if args.out is not None:
        write_json(args.out, obj)
        print("wrote %s" % args.out, file=sys.stderr)
        return None
    json.dump(obj, sys.stdout, sort_keys=True)
    sys.stdout.write("\n")
    return None


# ---------------------------------------------------------------------------
# parser assembly
# ---------------------------------------------------------------------------


def _add_seesaw_opts(p: argparse.ArgumentParser):
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--restarts", type=int, default=20)
    p.add_argument("--max-iters", dest="max_iters", type=int, default=200)
    p.add_argument("--tol", type=float, default=1e-9)
    p.add_argument("--threads", type=int, default=1)


def _add_oracle_opts(p: argparse.ArgumentParser):
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--samples", type=int, default=20000)
    p.add_argument("--polish-steps", dest="polish_steps", type=int, default=200)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="schmidt-norms",
                     description="Schmidt-rank-constrained norms, cones, and "
                                 "map certificates")
    sub = parser.add_subparsers(dest="group", required=True)

    p_norm = sub.add_parser("norm", help="bipartite operator norms")
    norm_sub = p_norm.add_subparsers(dest="variant", required=True)
    for variant in ("sk", "omin", "minorder", "maxspace"):
        p = norm_sub.add_parser(variant)
        p.add_argument("file")
        p.add_argument("--k", type=int, required=True)
        _add_seesaw_opts(p)
        p.set_defaults(func=_handle_norm, command="norm %s" % variant)

    p_cone = sub.add_parser("cone", help="cone membership and witnesses")
    cone_sub = p_cone.add_subparsers(dest="variant", required=True)
    p = cone_sub.add_parser("blockpos")
    p.add_argument("file")
    p.add_argument("--k", type=int, required=True)
    _add_seesaw_opts(p)
    p.set_defaults(func=_handle_cone_blockpos, command="cone blockpos")
    p = cone_sub.add_parser("witness")
    p.add_argument("--witness", required=True)
    p.add_argument("--state", required=True)
    p.add_argument("--k", type=int, required=True)
    _add_seesaw_opts(p)
    p.set_defaults(func=_handle_cone_witness, command="cone witness")
    p = cone_sub.add_parser("verify-sn")
    p.add_argument("--state", required=True)
    p.add_argument("--ensemble", required=True)
    p.set_defaults(func=_handle_cone_verify_sn, command="cone verify-sn")

    p_map = sub.add_parser("map", help="map-level certificates and norms")
    map_sub = p_map.add_subparsers(dest="variant", required=True)
    for variant in ("kpos", "kpeb", "idk-norm", "trnorm-h"):
        p = map_sub.add_parser(variant)
        p.add_argument("file")
        p.add_argument("--k", type=int, required=True)
        if variant == "kpeb":
            p.add_argument("--ensemble", default=None)
        _add_seesaw_opts(p)
        p.set_defaults(func=_handle_map, command="map %s" % variant)
    p = map_sub.add_parser("detect")
    p.add_argument("--state", required=True)
    p.add_argument("--map", required=True)
    p.add_argument("--k", type=int, required=True)
    _add_seesaw_opts(p)
    p.set_defaults(func=_handle_map, variant="detect", command="map detect")

    p_oracle = sub.add_parser("oracle", help="independent brute-force checks")
    oracle_sub = p_oracle.add_subparsers(dest="variant", required=True)
    for variant in ("sk", "blockmin", "minorder", "omin", "idk"):
        p = oracle_sub.add_parser(variant)
        p.add_argument("file")
        p.add_argument("--k", type=int, required=True)
        _add_oracle_opts(p)
        p.set_defaults(func=_handle_oracle, command="oracle %s" % variant)
    p = oracle_sub.add_parser("recheck")
    p.add_argument("--report", required=True)
    p.add_argument("--file", default=None)
    p.add_argument("--state", default=None)
    p.add_argument("--witness", default=None)
    p.add_argument("--map", default=None)
    p.set_defaults(func=_handle_oracle_recheck, command="oracle recheck",
                   variant="recheck")

    p_fx = sub.add_parser("fixtures", help="emit built-in fixture files")
    fx_sub = p_fx.add_subparsers(dest="action", required=True)
    p = fx_sub.add_parser("emit")
    p.add_argument("name", choices=["example51", "swap", "isotropic"])
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--fidelity", type=float, default=None)
    p.add_argument("--out", default=None)
    p.set_defaults(func=_handle_fixtures, command="fixtures emit")

    return parser


def _summary(command: str, result: dict, code: int) -> str:
    bits = [command]
    for key in ("value", "min_value", "pairing", "trace_norm_value", "status",
                "verified", "certified", "match"):
        if isinstance(result, dict) and key in result and result[key] is not None:
            val = result[key]
            bits.append("%s=%.9g" % (key, val) if isinstance(val, float)
                        else "%s=%s" % (key, val))
    bits.append("exit=%d" % code)
    return "  ".join(bits)


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if args.func is _handle_fixtures:
            args.func(args)
            return 0
        t0 = time.monotonic()
        inputs, params, result, code = args.func(args)
        report = {
            "command": args.command,
            "inputs": inputs,
            "parameters": params,
            "result": result,
            "runtime_ms": int((time.monotonic() - t0) * 1000),
            "version": __version__,
        }
        print(json.dumps(report, sort_keys=True, indent=2))
        print(_summary(args.command, result, code), file=sys.stderr)
        return code
    except (_CliError, FormatError, ValueError) as exc:
        print("error: %s" % exc, file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
