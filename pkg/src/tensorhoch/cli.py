"""``tensorhoch`` command line.

Exit status: 0 when every check passes, 1 on a computational mismatch
(nonzero d^2, failed axiom, failed comparison), 2 on bad input.
Reports are JSON (keys sorted, no timings unless ``--timings``) with a CSV
summary written next to them when ``--out`` is given.
"""

from __future__ import annotations

import csv
import io
import json
import os
import sys
import time
from pathlib import Path

import click

from . import __version__, aposet, casestudies, moncat, suite, tcomplex
from .exactla import CACHE_ENV, MatrixCache, cache_gc, cohomology, parse_field

EXIT_OK, EXIT_MISMATCH, EXIT_INPUT = 0, 1, 2


class InputError(click.ClickException):
    exit_code = EXIT_INPUT


# ---------------------------------------------------------------- output

def jsonable(x):
    """Recursively turn tuple keys into ``"a,b"`` strings and tuples into lists."""
    if isinstance(x, dict):
        return {(",".join(map(str, k)) if isinstance(k, tuple) else str(k)): jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [jsonable(v) for v in x]
    if hasattr(x, "to_json"):
        return jsonable(x.to_json())
    return x


def dumps(report):
    return json.dumps(jsonable(report), sort_keys=True, indent=2) + "\n"


def csv_rows(report):
    """Flatten the tabular part of a report (first list of flat dicts found)."""
    for key in ("summary", "cohomology", "rows", "checks"):
        rows = report.get(key)
        if isinstance(rows, list) and rows and isinstance(rows[0], dict):
            return [{k: v for k, v in r.items() if not isinstance(v, (dict, list))} for r in rows]
    return [{k: v for k, v in report.items() if not isinstance(v, (dict, list))}]


def emit(ctx, report, out):
    text = dumps(report)
    if out is None:
        click.echo(text, nl=False)
        return
    path = Path(out)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(text)
    rows = csv_rows(jsonable(report))
    buf = io.StringIO()
    fields = sorted({k for r in rows for k in r})
    w = csv.DictWriter(buf, fieldnames=fields, lineterminator="\n")
    w.writeheader()
    w.writerows(rows)
    path.with_suffix(".csv").write_text(buf.getvalue())
    if ctx.obj.get("verbose"):
        click.echo(f"wrote {path} and {path.with_suffix('.csv')}", err=True)


def header(ctx, g=None, window=None, signs=None):
    h = {"tool": "tensorhoch", "version": __version__, "threads": ctx.obj["threads"]}
    if g is not None and window is not None and signs is not None:
        h.update(tcomplex.report_header(g, window, signs))
    elif g is not None:
        h.update({"presentation": {"name": g.P.name, "hash": g.P.hash, "generator": g.name}, "field": g.F.tag})
    return h


# ---------------------------------------------------------------- inputs

def load_generator(builtin, presentation, field):
    if bool(builtin) == bool(presentation):
        raise InputError("give exactly one of --builtin NAME or --presentation FILE")
    try:
        F = parse_field(field) if field else None
    except ValueError as exc:
        raise InputError(str(exc))
    if builtin:
        try:
            return moncat.builtin(builtin, F)
        except (ValueError, IndexError, KeyError) as exc:
            raise InputError(f"--builtin {builtin!r}: {exc}")
    try:
        data = json.loads(Path(presentation).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise InputError(f"--presentation {presentation}: {exc}")
    blob = data.get("presentation", data)
    try:
        P = moncat.MonoidalPresentation.from_json(blob)
    except (KeyError, ValueError, TypeError) as exc:
        raise InputError(f"--presentation {presentation}: malformed ({exc})")
    if F is not None and F != P.field:
        raise InputError(f"--field {field} disagrees with the file's field {P.field.tag}")
    gen = data.get("generator", {})
    members = [tuple(m) for m in gen.get("members", [P.objects])]
    moncat.validate(P)
    return P, moncat.Generator(P, members, gen.get("names"))


def make_window(pmax, qmax, degmax):
    if degmax is None and pmax is None and qmax is None:
        raise InputError("give a window: --degmax N (and optionally --pmax/--qmax)")
    n = degmax if degmax is not None else (pmax or 0) + (qmax or 0)
    w = tcomplex.Window(n if pmax is None else pmax, n if qmax is None else qmax, n)
    if min(w.p_max, w.q_max, w.n_max) < 0:
        raise InputError("window bounds must be non-negative")
    return w


def load_signs(ctx, path):
    if path:
        try:
            return tcomplex.SignConvention.load(path)
        except (OSError, ValueError, KeyError) as exc:
            raise InputError(f"--signs {path}: {exc}")
    return tcomplex.resolve_signs(cache_dir=ctx.obj["cache"])


def presentation_options(f):
    f = click.option("--field", default=None, help="q or fp:<prime> (default fp:65521)")(f)
    f = click.option("--presentation", type=click.Path(exists=True, dir_okay=False), default=None,
                     help="presentation JSON file")(f)
    f = click.option("--builtin", default=None, help=f"one of {', '.join(moncat.BUILTINS)} (or vec:n, kg:n, ...)")(f)
    return f


def window_options(f):
    f = click.option("--degmax", "--window", "degmax", type=int, default=None, help="top total degree p+q")(f)
    f = click.option("--qmax", type=int, default=None)(f)
    f = click.option("--pmax", type=int, default=None)(f)
    return f


common_out = click.option("--out", type=click.Path(dir_okay=False), default=None, help="report path (.json)")
signs_opt = click.option("--signs", "signs_path", type=click.Path(exists=True, dir_okay=False), default=None,
                         help="sign convention file (default: resolve, cached under --cache)")
limit_opt = click.option("--limit", type=int, default=tcomplex.DEFAULT_LIMIT, show_default=True,
                         help="refuse cochain spaces larger than this")


# ---------------------------------------------------------------- commands

@click.group()
@click.option("--cache", type=click.Path(file_okay=False), default=None, envvar=CACHE_ENV,
              help=f"matrix and sign cache directory (env {CACHE_ENV})")
@click.option("--threads", type=int, default=1, show_default=True,
              help="recorded in reports; elimination runs single-threaded")
@click.option("--timings", is_flag=True, help="include wall-clock timings in reports")
@click.option("-v", "--verbose", is_flag=True)
@click.version_option(__version__)
@click.pass_context
def main(ctx, cache, threads, timings, verbose):
    """Exact tensor-Hochschild computations for small monoidal categories."""
    if threads < 1:
        raise InputError("--threads must be >= 1")
    ctx.ensure_object(dict)
    ctx.obj.update(cache=cache, threads=threads, timings=timings, verbose=verbose)


@main.command("aposet")
@click.option("--n", "n", type=int, required=True, help="associahedron A_n")
@click.option("--check-lemma", is_flag=True, help="run the boundary lemma check")
@click.option("--dump", is_flag=True, help="include vertices, edges and paths")
@signs_opt
@common_out
@click.pass_context
def aposet_cmd(ctx, n, check_lemma, dump, signs_path, out):
    """Enumerate A_n and its admissible paths."""
    if not 0 <= n <= 5:
        raise InputError("--n must lie in 0..5")
    a = aposet.associahedron(n)
    rep = {"header": header(ctx), "n": n, "vertices": len(a.vertices), "admissible_paths": len(a.paths)}
    if dump:
        rep["aposet"] = a.to_json()
    ok = True
    if check_lemma:
        if n < 1:
            raise InputError("the boundary lemma needs n >= 1")
        s = load_signs(ctx, signs_path)
        lem = aposet.boundary_lemma_check(n, s)
        rep["lemma"] = {"holds_mod2": lem.holds_mod2, "holds_signed": lem.holds_signed,
                        "mismatch_witness": lem.mismatch_witness}
        ok = lem.holds_mod2 and lem.holds_signed
    emit(ctx, rep, out)
    ctx.exit(EXIT_OK if ok else EXIT_MISMATCH)


@main.command()
@presentation_options
@common_out
@click.pass_context
def validate(ctx, builtin, presentation, field, out):
    """Check the monoidal axioms of a presentation."""
    try:
        P, g = load_generator(builtin, presentation, field)
    except moncat.ValidationFailure as exc:
        emit(ctx, {"header": header(ctx), "valid": False, "axiom": exc.axiom, "witness": str(exc.witness)}, out)
        ctx.exit(EXIT_MISMATCH)
    rep = {"header": header(ctx, g), "valid": True, "strict": P.is_strict(), "unit": P.unit,
           "objects": len(P.objects), "members": [list(m) for m in g.members]}
    emit(ctx, rep, out)


@main.command()
@click.option("--degmax", "--window", "degmax", type=int, default=4, show_default=True,
              help="probe window p+q <= N")
@common_out
@click.pass_context
def signs(ctx, degmax, out):
    """Resolve the d_i sign convention and save it."""
    w = tcomplex.Window.total(degmax)
    try:
        s = tcomplex.resolve_signs(window=w, cache_dir=ctx.obj["cache"],
                                   log=(lambda m: click.echo(m, err=True)) if ctx.obj["verbose"] else None)
    except tcomplex.Unresolvable as exc:
        click.echo(f"unresolvable: {exc}", err=True)
        ctx.exit(EXIT_MISMATCH)
    if out:
        s.save(out)
        click.echo(f"saved {out} (hash {s.hash})")
    else:
        click.echo(json.dumps(s.to_json(), sort_keys=True, indent=2))


@main.command()
@presentation_options
@window_options
@signs_opt
@limit_opt
@common_out
@click.pass_context
def d2check(ctx, builtin, presentation, field, pmax, qmax, degmax, signs_path, limit, out):
    """Verify every component of d^2 is exactly zero on the window."""
    P, g = load_generator(builtin, presentation, field)
    w = make_window(pmax, qmax, degmax)
    s = load_signs(ctx, signs_path)
    try:
        rep = tcomplex.verify_d_squared(g, w, s, tcomplex.Assembler(g, limit))
    except tcomplex.WindowExceeded as exc:
        raise InputError(str(exc))
    body = rep.to_json()
    body["header"] = header(ctx, g, w, s)
    body["checks"] = [dict(c, source=f"{c['source'][0]},{c['source'][1]}",
                           target=f"{c['target'][0]},{c['target'][1]}") for c in body["checks"]]
    emit(ctx, body, out)
    ctx.exit(EXIT_OK if rep.zero else EXIT_MISMATCH)


KINDS = ("total", "f1", "dy", "hochschild", "unital", "spectral")


@main.command("cohomology")
@presentation_options
@window_options
@click.option("--kind", type=click.Choice(KINDS), default="total", show_default=True)
@signs_opt
@limit_opt
@common_out
@click.pass_context
def cohomology_cmd(ctx, builtin, presentation, field, pmax, qmax, degmax, kind, signs_path, limit, out):
    """Cohomology of the total complex or one of its pieces."""
    t0 = time.perf_counter()
    P, g = load_generator(builtin, presentation, field)
    w = make_window(pmax, qmax, degmax)
    s = load_signs(ctx, signs_path)
    A = tcomplex.Assembler(g, limit)
    cache = MatrixCache(ctx.obj["cache"]) if ctx.obj["cache"] else None
    rep = {"header": header(ctx, g, w, s), "kind": kind}
    try:
        if kind == "total":
            body = tcomplex.cohomology_report(g, w, s, A, cache=cache)
            rep.update({k: v for k, v in body.items() if k not in rep["header"]})
        elif kind == "f1":
            rep["cohomology"] = cohomology(tcomplex.f_subcomplex(g, w, s, 1, A)).to_json()["cohomology"]
        elif kind == "dy":
            dy, tc = tcomplex.dy_subcomplex(g, w, s, A)
            rep["cohomology"] = cohomology(dy.complex).to_json()["cohomology"]
            rep["chain_map"] = dy.is_chain_map(tc)
            rep["induced_ranks"] = dy.induced_ranks(tc)
        elif kind == "hochschild":
            hh = tcomplex.hochschild_quotient(g, w, A)
            rep["cohomology"] = cohomology(hh.complex).to_json()["cohomology"]
        elif kind == "unital":
            res = tcomplex.unital_extend(g, w, s, A)
            rep["cohomology"] = cohomology(res.complex).to_json()["cohomology"]
            rep["identities"] = res.checks
            rep["identities_hold"] = res.ok
        else:
            rep["pages"] = tcomplex.spectral_sequence_F(g, w, s, A).to_json()
    except tcomplex.WindowExceeded as exc:
        raise InputError(str(exc))
    except tcomplex.NoUnit as exc:
        raise InputError(f"unital extension: {exc}")
    if ctx.obj["timings"]:
        rep["seconds"] = round(time.perf_counter() - t0, 3)
    emit(ctx, rep, out)
    bad = rep.get("identities_hold") is False or rep.get("chain_map") is False
    ctx.exit(EXIT_MISMATCH if bad else EXIT_OK)


def _parse_param(text):
    if "=" not in text:
        raise InputError(f"--param expects key=value, got {text!r}")
    k, v = text.split("=", 1)
    try:
        return k, json.loads(v)
    except json.JSONDecodeError:
        return k, v


@main.command()
@click.argument("name", type=click.Choice(sorted(casestudies.STUDIES)))
@click.option("--param", "params", multiple=True, help="study parameter key=value (repeatable)")
@common_out
@click.pass_context
def casestudy(ctx, name, params, out):
    """Run one worked computation against its oracle."""
    kw = dict(_parse_param(p) for p in params)
    try:
        rep = casestudies.run_study(name, **kw)
    except (casestudies.SizeBound, TypeError, ValueError) as exc:
        raise InputError(str(exc))
    rep["header"] = header(ctx)
    emit(ctx, rep, out)
    ctx.exit(EXIT_OK if rep["pass"] else EXIT_MISMATCH)


@main.command("suite")
@click.option("--only", type=int, multiple=True, help="run only these criterion ids")
@common_out
@click.pass_context
def suite_cmd(ctx, only, out):
    """Run every acceptance check and print a summary table."""
    if ctx.obj["cache"]:
        os.environ[CACHE_ENV] = ctx.obj["cache"]
    results = suite.run_all(set(only) if only else None)
    for r in results:
        click.echo(f"{r['id']:>2}  {'pass' if r['pass'] else 'FAIL'}  {r['title']}", err=out is None)
    summary = [{"id": r["id"], "title": r["title"], "pass": r["pass"]} for r in results]
    if not ctx.obj["timings"]:
        for r in results:
            r.pop("seconds", None)
    emit(ctx, {"header": header(ctx), "summary": summary, "results": results}, out)
    ctx.exit(EXIT_OK if all(r["pass"] for r in results) else EXIT_MISMATCH)


@main.group()
def cache():
    """Matrix cache maintenance."""


@cache.command("gc")
@click.option("--max-bytes", type=int, required=True)
@click.pass_context
def cache_gc_cmd(ctx, max_bytes):
    """Evict least recently used matrices until the cache fits."""
    d = ctx.obj["cache"]
    if not d:
        raise InputError(f"no cache directory: pass --cache DIR or set {CACHE_ENV}")
    try:
        rep = cache_gc(d, max_bytes)
    except OSError as exc:
        click.echo(f"cache gc failed: {exc}", err=True)
        ctx.exit(EXIT_MISMATCH)
    click.echo(dumps(rep), nl=False)


def run(argv=None):
    """Entry point that returns the exit status instead of raising SystemExit."""
    try:
        main.main(args=argv, prog_name="tensorhoch", standalone_mode=False)
    except click.exceptions.Exit as exc:
        return exc.exit_code
    except click.ClickException as exc:
        exc.show()
        return exc.exit_code
    except click.exceptions.Abort:
        return EXIT_INPUT
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
