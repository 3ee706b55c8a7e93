"""Command-line interface: ``quiverstab <command> ...``.

Every command emits a report ``{"body": ..., "timings": ...}``. Bodies are
deterministic. Exit codes: 0 success or semistable, 1 unstable or a failed
check, 2 error.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from fractions import Fraction
from pathlib import Path

from .exact import Matrix, RationalPolynomial, contains, preimage, scalar_to_json
from .identities import SUITES, run_suite
from .invariants import InvariantDescriptor, default_veronese_degree, hitchin_point, trace_invariant, veronese_coordinates
from .io import (
    VERSION,
    Problem,
    SchemaError,
    canonical_json,
    digest,
    lambda_to_json,
    load_problem,
    parse_lambda,
    parse_problem,
    parse_subspace_tuple,
    subspace_tuple_to_json,
)
from .quiver import OrientedCycle, SubspaceTuple, is_subrepresentation
from .sheaf import SheafDatum, VSplitDatum, slope_semistability_verdict
from .stability import (
    DEFAULT_BUDGET,
    BudgetExceeded,
    KernelChainResult,
    NormalizationError,
    asymptotic_check,
    hn_compute,
    kernel_chain,
    king_check,
    nullcone_check,
    proportional_oracle,
    subspace_key,
    verify_hn_point,
)
from .verdict import Status
from .weights import MAX_TENSOR_DIM, character_pairing, flag_characterization, hm_weight, hm_weight_via_tensor, king_weight


class CommandError(Exception):
    def __init__(self, code: str, message: str):
        super().__init__(message)
        self.code = code


def _s(x) -> str:
    return str(scalar_to_json(x)) if not isinstance(x, (int, Fraction)) else str(Fraction(x))


def _need(cond, message: str):
    if not cond:
        raise CommandError("invalid", message)


def _sigma(p: Problem) -> dict:
    if p.params is not None:
        return dict(p.params.sigma)
    return {v: 1 for v in p.quiver.vertices}


def _default_sheaf(p: Problem) -> VSplitDatum:
    dim_x = p.params.dim_x
    out = {}
    for v in p.quiver.vertices:
        r = p.rep.dims[v]
        out[v] = SheafDatum(r, RationalPolynomial([0] * dim_x + [r]), Fraction(0))
    return VSplitDatum(out)


def _witness_json(w) -> dict | None:
    if w is None:
        return None
    if isinstance(w, SubspaceTuple):
        return {"spaces": subspace_tuple_to_json(w), "dims": w.dims()}
    return {"candidate": w}


def _value_json(v):
    if v is None:
        return None
    if isinstance(v, tuple):
        return [_value_json(x) for x in v]
    return _s(v) if isinstance(v, Fraction) else v


# ---------------------------------------------------------------------------
# commands; each returns (result dict, exit code)


def run_check(p: Problem, mode: str, exhaustive: bool, use_candidates: bool, compare: str, budget: int):
    if mode in ("king", "asymptotic"):
        _need(p.rep is not None, "a representation is required")
        _need(p.params is not None, "parameters are required")
        if exhaustive and p.field.p is None:
            raise CommandError("invalid", "exhaustive mode requires a prime field")
        if not exhaustive and not use_candidates:
            exhaustive = p.field.p is not None
        cands = None
        if not exhaustive:
            _need(p.has_candidates, "candidate mode requires a 'candidates' list")
            cands = [c.spaces for c in p.candidates if c.spaces is not None]
        if mode == "king":
            verdict = king_check(p.rep, p.params.eta, cands, budget)
        else:
            total = p.sheaf or _default_sheaf(p)
            given = {subspace_key(c.spaces): c.sheaf for c in p.candidates if c.spaces is not None and c.sheaf is not None}
            fallback = proportional_oracle(p.rep, total)

            def oracle(sub):
                return given.get(subspace_key(sub)) or fallback(sub)

            verdict = asymptotic_check(p.rep, p.params, total, oracle, cands, budget)
        pairing = character_pairing(p.params.eta, verdict.witness) if isinstance(verdict.witness, SubspaceTuple) else None
        result = {
            "mode": mode,
            "status": verdict.status.value,
            "certificate": verdict.certificate.value,
            "witness": _witness_json(verdict.witness),
            "pairing": _value_json(pairing),
            "checked": verdict.details.get("checked"),
        }
    elif mode == "slope":
        _need(p.params is not None and p.sheaf is not None, "slope mode needs parameters and sheaf data")
        if exhaustive:
            raise CommandError("invalid", "slope mode is candidate-relative only")
        cands = [c.sheaf for c in p.candidates if c.sheaf is not None]
        verdict = slope_semistability_verdict(p.sheaf, cands, p.params, compare)
        result = {
            "mode": mode,
            "compare": compare,
            "status": verdict.status.value,
            "certificate": verdict.certificate.value,
            "witness": _witness_json(verdict.witness),
            "checked": len(cands),
        }
    else:
        raise CommandError("invalid", f"unknown mode {mode}")
    return result, (1 if verdict.status is Status.UNSTABLE else 0)


def run_hn(p: Problem, budget: int):
    _need(p.rep is not None and p.params is not None, "a representation and parameters are required")
    _need(p.field.p is not None, "HN computation requires a prime field")
    from .stability import enumerate_subrepresentations

    subs = list(enumerate_subrepresentations(p.rep, budget))
    hn = hn_compute(p.rep, p.params.sigma, p.params.eta, subreps=subs)
    ok = verify_hn_point(p.rep, hn.steps, p.params.sigma, p.params.eta, subreps=subs)
    return {
        "steps": [{"spaces": subspace_tuple_to_json(s), "dims": s.dims()} for s in hn.steps],
        "slopes": [_s(x) for x in hn.slopes],
        "verified": ok,
    }, (0 if ok else 1)


def run_destabilize(p: Problem):
    _need(p.rep is not None, "a representation is required")
    if p.rep.epsilon:
        raise CommandError("invalid", "the kernel chain needs epsilon = 0")
    sigma = _sigma(p)
    res = kernel_chain(p.rep, sigma)
    if isinstance(res, KernelChainResult):
        return {
            "exhausting": True,
            "sigma": sigma,
            "flag": {"steps": [subspace_tuple_to_json(SubspaceTuple(s)) for s in res.flag.steps], "weights": list(res.flag.weights)},
            "lambda": lambda_to_json(res.lam),
            "mu": res.mu,
            "expected_mu": -sum(sigma[v] * p.rep.dims[v] for v in p.quiver.vertices),
        }, 0
    return {"exhausting": False, "sigma": sigma, "chain": [subspace_tuple_to_json(SubspaceTuple(s)) for s in res.chain]}, 0


def run_invariants(p: Problem, veronese: str | None):
    _need(p.rep is not None, "a representation is required")
    h = hitchin_point(p.rep)
    result = {"hitchin": h.to_json(), "nullcone": nullcone_check(p.rep)}
    if veronese is not None:
        d = default_veronese_degree(h) if veronese == "auto" else int(veronese)
        result["veronese"] = {"degree": d, "coordinates": [scalar_to_json(x) for x in veronese_coordinates(h, d)]}
    return result, 0


def run_weights(p: Problem, lam_obj):
    _need(p.rep is not None, "a representation is required")
    lam = parse_lambda(lam_obj, p.rep) if lam_obj is not None else p.lam
    _need(lam is not None, "no one-parameter subgroup given (use --lambda or a 'lambda' entry)")
    sigma = _sigma(p)
    mu = hm_weight(p.rep, lam)
    result = {"lambda": lambda_to_json(lam), "mu": mu, "flag_characterization": flag_characterization(p.rep, lam)}
    if sum(sigma[v] * p.rep.dims[v] for v in p.quiver.vertices) <= MAX_TENSOR_DIM:
        result["mu_tensor"] = hm_weight_via_tensor(p.rep, lam, sigma)
    if p.params is not None:
        result["king_weight"] = _value_json(king_weight(p.rep, lam, p.params.eta))
    return result, 0


def run_identities(which: str, trials: int, seed: int):
    names = SUITES if which == "all" else (which,)
    results = [run_suite(n, trials, seed) for n in names]
    ok = all(r.ok for r in results)
    return {"seed": seed, "suites": [r.to_json() for r in results], "all_passed": ok}, (0 if ok else 1)


# ---------------------------------------------------------------------------
# verify


def _invariant_subspace(rep, spaces: dict) -> bool:
    """Whether ``Y = {x : f(x) in Y_head for all arrow copies}`` holds at every vertex."""
    for v in rep.quiver.vertices:
        pulled = Matrix.identity(rep.dims[v], rep.field)
        for a in rep.quiver.arrows:
            if a.tail != v:
                continue
            for m in rep.maps[a.name]:
                if pulled.cols:
                    pulled = pulled @ preimage(m @ pulled, spaces[a.head])
        if pulled.cols != spaces[v].cols or not contains(pulled, spaces[v]):
            return False
    return True


def verify_body(body: dict) -> list[tuple[str, bool]]:
    cmd = body["command"]
    result = body["result"]
    checks: list[tuple[str, bool]] = []
    if cmd == "identities":
        again, _ = run_identities(body["flags"]["which"], body["flags"]["trials"], result["seed"])
        checks.append(("identity suites reproduce", again == result))
        checks.append(("all trials passed", result["all_passed"]))
        return checks
    p = parse_problem(body["problem"], body.get("flags", {}).get("allow_top_degree", False))
    checks.append(("input digest", digest(body["problem"]) == body["input_digest"]))
    if cmd == "check":
        w = result.get("witness")
        status = result["status"]
        if w is not None and "spaces" in w:
            sub = parse_subspace_tuple(w["spaces"], p.rep, "witness")
            pairing = character_pairing(p.params.eta, sub)
            checks.append(("witness is a subrepresentation", is_subrepresentation(p.rep, sub)))
            checks.append(("witness is nontrivial and proper", not sub.is_zero() and not sub.is_full(p.rep)))
            checks.append(("pairing matches", _s(pairing) == result["pairing"]))
            if status == Status.UNSTABLE.value:
                if result["mode"] == "king":
                    checks.append(("pairing is positive", pairing > 0))
                else:
                    checks.append(("pairing is nonnegative", pairing >= 0))
            else:
                checks.append(("pairing is zero", pairing == 0))
        elif w is not None and "candidate" in w:
            cands = [c.sheaf for c in p.candidates if c.sheaf is not None]
            v = slope_semistability_verdict(p.sheaf, cands, p.params, result["compare"])
            checks.append(("candidate verdict reproduces", v.status.value == status and v.witness == w["candidate"]))
        else:
            checks.append(("no witness claimed for a stable verdict", status == Status.STABLE.value))
    elif cmd == "hn":
        steps = [parse_subspace_tuple(s["spaces"], p.rep, f"steps[{i}]") for i, s in enumerate(result["steps"])]
        checks.append(("filtration passes verify_hn", verify_hn_point(p.rep, steps, p.params.sigma, p.params.eta)))
    elif cmd == "destabilize":
        if result["exhausting"]:
            lam = parse_lambda(result["lambda"], p.rep)
            mu = hm_weight(p.rep, lam)
            checks.append(("weight matches", mu == result["mu"]))
            checks.append(("weight is -sum sigma r", mu == result["expected_mu"]))
            checks.append(("weight is negative", mu < 0))
            checks.append(("flag characterization holds", flag_characterization(p.rep, lam)))
        else:
            last = result["chain"][-1] if result["chain"] else None
            spaces = (
                parse_subspace_tuple(last, p.rep, "chain[-1]").spaces
                if last is not None
                else {v: Matrix.zeros(p.rep.dims[v], 0, p.field) for v in p.quiver.vertices}
            )
            checks.append(("chain is stationary", _invariant_subspace(p.rep, spaces)))
            checks.append(("chain is not exhausting", not all(spaces[v].cols == p.rep.dims[v] for v in p.quiver.vertices)))
    elif cmd == "invariants":
        ok = True
        for e in result["hitchin"]["entries"]:
            inv = e["invariant"]
            d = InvariantDescriptor(None if inv["kind"] == "t0" else OrientedCycle(tuple((n, k) for n, k in inv["cycle"])))
            ok = ok and scalar_to_json(trace_invariant(p.rep, d)) == e["value"]
        checks.append(("invariants re-evaluate", ok))
        checks.append(("nullcone flag", nullcone_check(p.rep) == result["nullcone"]))
    elif cmd == "weights":
        lam = parse_lambda(result["lambda"], p.rep)
        checks.append(("weight re-evaluates", hm_weight(p.rep, lam) == result["mu"]))
        checks.append(("flag characterization", flag_characterization(p.rep, lam) == result["flag_characterization"]))
        checks.append(("sign convention", (result["mu"] < 0) == result["flag_characterization"]))
    else:
        raise CommandError("invalid", f"cannot verify command {cmd!r}")
    return checks


# ---------------------------------------------------------------------------
# reports


def make_body(command: str, flags: dict, result: dict, problem: Problem | None = None) -> dict:
    body = {"command": command, "version": VERSION, "flags": flags, "result": result}
    if problem is not None:
        body["problem"] = problem.raw
        body["input_digest"] = problem.digest()
    return body


def dump_report(body: dict, seconds: float) -> str:
    return json.dumps({"body": body, "timings": {"seconds": round(seconds, 6)}}, sort_keys=True, indent=2) + "\n"


def text_summary(body: dict) -> str:
    rows = [("command", body["command"])]
    for k, v in sorted(body["result"].items()):
        if isinstance(v, (dict, list)):
            v = canonical_json(v)
            if len(v) > 60:
                v = v[:57] + "..."
        rows.append((k, str(v)))
    width = max(len(k) for k, _ in rows)
    return "\n".join(f"{k.ljust(width)} : {v}" for k, v in rows) + "\n"


def run_corpus(directory: str, seed: int, trials: int, budget: int, out_dir: str | None):
    files = sorted(Path(directory).glob("*.json"))
    _need(files, f"no problem files in {directory}")
    entries = []
    bodies = []
    for path in files:
        p = load_problem(str(path))
        runs = []
        if p.params is not None and p.field.p is not None:
            runs.append(("check", {"mode": "king"}, lambda p=p: run_check(p, "king", True, False, "slope", budget)))
            runs.append(("hn", {}, lambda p=p: run_hn(p, budget)))
        if p.rep is not None and not p.rep.epsilon:
            runs.append(("destabilize", {}, lambda p=p: run_destabilize(p)))
        if p.rep is not None:
            runs.append(("invariants", {"veronese": None}, lambda p=p: run_invariants(p, None)))
        for cmd, flags, fn in runs:
            result, code = fn()
            body = make_body(cmd, flags, result, p)
            bodies.append(body)
            entries.append({"file": path.name, "command": cmd, "exit": code, "body_digest": digest(body)})
            if out_dir:
                Path(out_dir).mkdir(parents=True, exist_ok=True)
                (Path(out_dir) / f"{path.stem}.{cmd}.json").write_text(dump_report(body, 0.0))
    ident, _ = run_identities("all", trials, seed)
    return {"files": len(files), "runs": entries, "identities": ident, "corpus_digest": digest([e["body_digest"] for e in entries])}, 0


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="quiverstab", description="Stability, weights and invariants of augmented quiver representations.")
    ap.add_argument("--version", action="version", version=VERSION)
    sub = ap.add_subparsers(dest="command", required=True)

    def common(sp, problem=True):
        if problem:
            sp.add_argument("file", help="problem JSON file")
            sp.add_argument("--allow-top-degree", action="store_true", help="accept delta of degree dim X")
        sp.add_argument("--out", help="write the JSON report here and print a text summary")
        sp.add_argument("--text", action="store_true", help="print an aligned text summary instead of JSON")

    sp = sub.add_parser("check", help="(semi)stability verdict")
    common(sp)
    sp.add_argument("--mode", choices=["king", "asymptotic", "slope"], default="king")
    g = sp.add_mutually_exclusive_group()
    g.add_argument("--exhaustive", action="store_true")
    g.add_argument("--candidates", action="store_true")
    sp.add_argument("--compare", choices=["slope", "polynomial"], default="slope")
    sp.add_argument("--budget", type=int, default=DEFAULT_BUDGET)

    sp = sub.add_parser("hn", help="Harder-Narasimhan filtration over F_p")
    common(sp)
    sp.add_argument("--budget", type=int, default=DEFAULT_BUDGET)

    sp = sub.add_parser("destabilize", help="kernel chain and its one-parameter subgroup")
    common(sp)

    sp = sub.add_parser("invariants", help="cycle-trace invariants")
    common(sp)
    sp.add_argument("--veronese", help="monomial degree d, or 'auto'")

    sp = sub.add_parser("weights", help="Hilbert-Mumford weight of a one-parameter subgroup")
    common(sp)
    sp.add_argument("--lambda", dest="lam", help="JSON file with {vertex: {basis, weights}}")

    sp = sub.add_parser("identities", help="randomized identity suites")
    common(sp, problem=False)
    sp.add_argument("--which", choices=list(SUITES) + ["all"], default="all")
    sp.add_argument("--trials", type=int, default=100)
    sp.add_argument("--seed", type=int, required=True)

    sp = sub.add_parser("verify", help="re-check the witnesses in a report")
    sp.add_argument("report")
    sp.add_argument("--out")
    sp.add_argument("--text", action="store_true")

    sp = sub.add_parser("corpus", help="run every problem file in a directory")
    sp.add_argument("directory")
    sp.add_argument("--seed", type=int, required=True)
    sp.add_argument("--trials", type=int, default=20)
    sp.add_argument("--budget", type=int, default=DEFAULT_BUDGET)
    sp.add_argument("--reports", help="directory for per-run reports")
    sp.add_argument("--out")
    sp.add_argument("--text", action="store_true")
    return ap


def execute(args) -> tuple[dict, int]:
    cmd = args.command
    top = getattr(args, "allow_top_degree", False)
    if cmd == "identities":
        result, code = run_identities(args.which, args.trials, args.seed)
        return make_body(cmd, {"which": args.which, "trials": args.trials}, result), code
    if cmd == "verify":
        with open(args.report) as fh:
            report = json.load(fh)
        body = report["body"] if "body" in report else report
        checks = verify_body(body)
        ok = all(c for _, c in checks)
        result = {"verified_command": body["command"], "checks": [{"check": n, "passed": c} for n, c in checks], "passed": ok}
        return make_body(cmd, {}, result), (0 if ok else 1)
    if cmd == "corpus":
        result, code = run_corpus(args.directory, args.seed, args.trials, args.budget, args.reports)
        return make_body(cmd, {"seed": args.seed, "trials": args.trials}, result), code
    p = load_problem(args.file, top)
    if cmd == "check":
        flags = {"mode": args.mode, "exhaustive": args.exhaustive, "candidates": args.candidates, "compare": args.compare, "allow_top_degree": top}
        result, code = run_check(p, args.mode, args.exhaustive, args.candidates, args.compare, args.budget)
    elif cmd == "hn":
        flags = {"allow_top_degree": top}
        result, code = run_hn(p, args.budget)
    elif cmd == "destabilize":
        flags = {"allow_top_degree": top}
        result, code = run_destabilize(p)
    elif cmd == "invariants":
        flags = {"veronese": args.veronese, "allow_top_degree": top}
        result, code = run_invariants(p, args.veronese)
    elif cmd == "weights":
        lam_obj = None
        if args.lam:
            with open(args.lam) as fh:
                lam_obj = json.load(fh)
        flags = {"lambda": lam_obj, "allow_top_degree": top}
        result, code = run_weights(p, lam_obj)
    else:
        raise CommandError("invalid", f"unknown command {cmd}")
    return make_body(cmd, flags, result, p), code


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    start = time.perf_counter()
    try:
        body, code = execute(args)
    except SchemaError as e:
        return _fail("schema", str(e), e.path)
    except BudgetExceeded as e:
        return _fail("budget", str(e))
    except NormalizationError as e:
        return _fail("normalization", str(e))
    except CommandError as e:
        return _fail(e.code, str(e))
    except (ValueError, KeyError, OSError, json.JSONDecodeError) as e:
        return _fail("invalid", f"{type(e).__name__}: {e}")
    report = dump_report(body, time.perf_counter() - start)
    if args.out:
        Path(args.out).write_text(report)
        sys.stdout.write(text_summary(body))
    elif args.text:
        sys.stdout.write(text_summary(body))
    else:
        sys.stdout.write(report)
    return code


def _fail(code: str, message: str, path: str | None = None) -> int:
    err = {"error": {"code": code, "message": message}}
    if path:
        err["error"]["field"] = path
    sys.stderr.write(json.dumps(err, sort_keys=True) + "\n")
    return 2


if __name__ == "__main__":
    sys.exit(main())
