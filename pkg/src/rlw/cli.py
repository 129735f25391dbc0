"""Command-line client for the lattice workbench service.

The CLI never computes anything itself: every subcommand issues an HTTP
request.  By default the service runs in-process (no network); pass
``--server URL`` to talk to a live instance instead.

Exit codes: 0 = completed, 2 = search ended indeterminate (budget), 1 =
any error.
"""

from __future__ import annotations

import json
import sys

import click
import httpx


class _Ctx:
    def __init__(self, server, as_json):
        self.server = server
        self.as_json = as_json
        self._client = None

    @property
    def client(self):
        if self._client is None:
            if self.server:
                self._client = httpx.Client(base_url=self.server, timeout=None)
            else:
                import warnings

                with warnings.catch_warnings():
                    warnings.simplefilter("ignore")
                    from fastapi.testclient import TestClient

                from .service import create_app

                self._client = TestClient(create_app())
        return self._client


pass_ctx = click.make_pass_decorator(_Ctx)


@click.group()
@click.option("--server", default=None, help="URL of a running service; default runs in-process.")
@click.option("--json", "as_json", is_flag=True, help="Emit raw JSON output.")
@click.pass_context
def main(ctx, server, as_json):
    """Rainbow-free lattice workbench."""
    ctx.obj = _Ctx(server, as_json)


def _post(ctx, path, payload):
    try:
        resp = ctx.client.post(path, json=payload)
    except httpx.HTTPError as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(1)
    if resp.status_code >= 400:
        try:
            detail = resp.json()
        except ValueError:
            detail = resp.text
        click.echo(f"error: {detail}", err=True)
        sys.exit(1)
    return resp


def _emit(ctx, doc, human, out=None):
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            json.dump(doc, fh, indent=2, sort_keys=True)
            fh.write("\n")
    if ctx.as_json:
        click.echo(json.dumps(doc, indent=2, sort_keys=True))
    else:
        for line in human:
            click.echo(line)


def _exit_for(doc):
    result = doc.get("result", {})
    if isinstance(result, dict) and result.get("indeterminate"):
        sys.exit(2)
    sys.exit(0)


def _spec_payload(n, rainbow, mono, palette, k, mode):
    return {
        "n": n,
        "rainbow": rainbow,
        "mono": mono,
        "palette": palette,
        "k": k,
        "mode": mode,
    }


_SPEC_OPTIONS = [
    click.option("--n", type=int, required=True, help="Ground-set size."),
    click.option("--rainbow", default=None, help="Rainbow target pattern descriptor."),
    click.option("--mono", default=None, help="Monochromatic target pattern descriptor."),
    click.option(
        "--palette",
        type=click.Choice(["exact", "at_most", "unbounded"]),
        default="unbounded",
    ),
    click.option("--k", type=int, default=None, help="Palette size (exact/at_most)."),
    click.option(
        "--mode", type=click.Choice(["induced", "weak"]), default="induced"
    ),
]


def _with_spec_options(fn):
    for opt in reversed(_SPEC_OPTIONS):
        fn = opt(fn)
    return fn


@main.command()
@_with_spec_options
@click.option("--budget", type=int, default=None, help="Node budget override.")
@click.option("--out", default=None, help="Write the result document to a file.")
@pass_ctx
def search(ctx, n, rainbow, mono, palette, k, mode, budget, out):
    """Search for a coloring avoiding the given targets."""
    payload = {"spec": _spec_payload(n, rainbow, mono, palette, k, mode), "budget": budget}
    doc = _post(ctx, "/search", payload).json()
    res = doc["result"]
    if res["found"]:
        status = "found"
    elif res["exhausted"]:
        status = "absent (exhaustive)"
    else:
        status = "indeterminate (budget)"
    _emit(ctx, doc, [f"search n={n}: {status}", f"nodes: {doc['stats']['nodes']}"], out)
    _exit_for(doc)


@main.group()
def number():
    """Compute threshold numbers by exhaustive scanning."""


def _number_common(ctx, payload, out):
    doc = _post(ctx, "/number", payload).json()
    res = doc["result"]
    lines = [f"{res['kind']} value: {res['value']}"]
    if res["good"]:
        lines = [f"{res['kind']}: good (no avoiding coloring in the window)"]
    lines.append(f"verified up to n={res['verified_up_to']}")
    if res["indeterminate"]:
        lines.append("indeterminate: budget exhausted before the window closed")
    _emit(ctx, doc, lines, out)
    _exit_for(doc)


@number.command("r")
@click.option("--p", required=True, help="Monochromatic target descriptor.")
@click.option("--k", type=int, required=True)
@click.option("--mode", type=click.Choice(["induced", "weak"]), default="induced")
@click.option("--n-max", type=int, default=6)
@click.option("--budget", type=int, default=None)
@click.option("--out", default=None)
@pass_ctx
def number_r(ctx, p, k, mode, n_max, budget, out):
    """Least n forcing a monochromatic copy under at most k colors."""
    _number_common(
        ctx,
        {"kind": "r", "p": p, "k": k, "mode": mode, "n_max": n_max, "budget": budget},
        out,
    )


@number.command("rr")
@click.option("--q", required=True, help="Rainbow target descriptor.")
@click.option("--p", required=True, help="Monochromatic target descriptor.")
@click.option("--n-max", type=int, default=5)
@click.option("--budget", type=int, default=None)
@click.option("--out", default=None)
@pass_ctx
def number_rr(ctx, q, p, n_max, budget, out):
    """Least n forcing a rainbow Q or monochromatic P over all partitions."""
    _number_common(
        ctx, {"kind": "rr", "q": q, "p": p, "n_max": n_max, "budget": budget}, out
    )


@number.command("gr")
@click.option("--q", required=True)
@click.option("--p", required=True)
@click.option("--k", type=int, required=True)
@click.option("--window", required=True, help="Scan window lo:hi.")
@click.option("--budget", type=int, default=None)
@click.option("--out", default=None)
@pass_ctx
def number_gr(ctx, q, p, k, window, budget, out):
    """Exact-k threshold over the given window."""
    try:
        lo, hi = (int(part) for part in window.split(":"))
    except ValueError:
        click.echo(f"error: bad --window {window!r}, expected lo:hi", err=True)
        sys.exit(1)
    _number_common(
        ctx,
        {"kind": "gr", "q": q, "p": p, "k": k, "window": [lo, hi], "budget": budget},
        out,
    )


@main.command()
@click.argument("which", type=click.Choice(["c3", "v2", "b2"]))
@click.option("--coloring", "coloring_path", required=True, type=click.Path(exists=True))
@click.option("--out", default=None)
@pass_ctx
def classify(ctx, which, coloring_path, out):
    """Match a coloring file against the structural shapes."""
    with open(coloring_path, "r", encoding="utf-8") as fh:
        coloring = json.load(fh)
    doc = _post(ctx, "/classify", {"which": which, "coloring": coloring}).json()
    if doc["result"]["matched"]:
        lines = [f"matched: {json.dumps(doc['instance'])}"]
    else:
        lines = ["no structural match"]
    _emit(ctx, doc, lines, out)
    _exit_for(doc)


@main.command()
@click.argument("type_name")
@click.option("--n", type=int, required=True)
@click.option("--x0", default=None, help="Subset literal, e.g. {1}.")
@click.option("--y0", default=None)
@click.option("--a", default=None, help="Apex subset for the fork shape.")
@click.option("--y-family", default=None, help="Comma-separated subset literals.")
@click.option("--x-family", default=None)
@click.option("--palette", default=None, help="JSON object family->color (0-based).")
@click.option("--free", default="low")
@click.option("--top", type=int, default=None)
@click.option("--out", default=None)
@pass_ctx
def generate(ctx, type_name, n, x0, y0, a, y_family, x_family, palette, free, top, out):
    """Generate a coloring realizing a structural instance."""
    instance = {"type": type_name, "n": n}
    if x0 is not None:
        instance["X0"] = x0
    if y0 is not None:
        instance["Y0"] = y0
    if a is not None:
        instance["A"] = a
    if y_family is not None:
        instance["Y_family"] = [t.strip() for t in y_family.split(",")]
    if x_family is not None:
        instance["X_family"] = [t.strip() for t in x_family.split(",")]
    payload = {
        "instance": instance,
        "palette": json.loads(palette) if palette else None,
        "free": free,
        "top": top,
    }
    doc = _post(ctx, "/generate", payload).json()
    w = doc["witnesses"][0]["coloring"]
    _emit(ctx, doc, [f"generated n={w['n']} k={w['k']} coloring"], out)
    _exit_for(doc)


@main.command()
@click.argument("which", type=click.Choice(["gr-c3", "gr-v2"]))
@click.option("--s", type=int, required=True)
@click.option("--k", type=int, required=True)
@click.option("--out", default=None)
@pass_ctx
def construct(ctx, which, s, k, out):
    """Build the layered avoiding coloring behind a lower bound."""
    doc = _post(ctx, "/construct", {"which": which, "s": s, "k": k}).json()
    _emit(ctx, doc, [f"constructed avoiding coloring on n={doc['n']}"], out)
    sys.exit(0)


@main.command()
@click.option("--m", type=int, required=True)
@click.option("--n0", type=int, required=True)
@pass_ctx
def blob(ctx, m, n0):
    """List the labeled interval sublattices of the blob grid."""
    doc = _post(ctx, "/blob", {"m": m, "n0": n0}).json()
    lines = [f"n = {doc['n']}"]
    lines += [
        f"{b['label']}: [{b['lo']}, {b['hi']}]" for b in doc["blocks"]
    ]
    _emit(ctx, doc, lines)
    sys.exit(0)


@main.command()
@click.option("--n", type=int, required=True)
@click.option("--family", required=True, help="Comma-separated subset literals.")
@pass_ctx
def lubell(ctx, n, family):
    """Exact Lubell mass of a family."""
    members = [t.strip() for t in family.split(",") if t.strip()]
    doc = _post(ctx, "/extremal/lubell", {"n": n, "family": members}).json()
    _emit(ctx, doc, [f"lubell = {doc['lubell']}"])
    sys.exit(0)


@main.command()
@click.option("--n", type=int, required=True)
@click.option("--p", required=True)
@pass_ctx
def lu(ctx, n, p):
    """Maximum Lubell mass over induced-P-free families (exact)."""
    doc = _post(ctx, "/extremal/lu", {"n": n, "p": p}).json()
    _emit(ctx, doc, [f"lu_max = {doc['lu_max']}", f"witness: {doc['witness']}"])
    sys.exit(0)


@main.command()
@click.option("--p", required=True)
@click.option("--n-probe", type=int, default=6)
@pass_ctx
def e(ctx, p, n_probe):
    """Largest all-free consecutive-level window count."""
    doc = _post(ctx, "/extremal/e", {"p": p, "n_probe": n_probe}).json()
    _emit(ctx, doc, [f"e = {doc['value']} ({doc['qualifier']})"])
    sys.exit(0)


@main.command()
@click.option("--q", required=True)
@pass_ctx
def g(ctx, q):
    """Extreme-element defect of a pattern (0, 1, or 2)."""
    doc = _post(ctx, "/extremal/g", {"q": q}).json()
    _emit(ctx, doc, [f"g = {doc['value']}"])
    sys.exit(0)


@main.command()
@click.option("--p", required=True)
@click.option("--n-max", type=int, default=4)
@pass_ctx
def uilb(ctx, p, n_max):
    """Is the level bound tight for every probed n?"""
    doc = _post(ctx, "/extremal/uilb", {"p": p, "n_max": n_max}).json()
    _emit(ctx, doc, [f"uniformly bounded: {doc['value']} ({doc['qualifier']})"])
    sys.exit(0)


@main.command()
@click.option("--v", type=int, required=True)
@click.option("--n", type=int, required=True)
@click.option("--verify", is_flag=True)
@pass_ctx
def gst(ctx, v, n, verify):
    """Disjoint-chain packing number, optionally search-verified."""
    doc = _post(ctx, "/extremal/gst", {"v": v, "n": n, "verify": verify}).json()
    line = f"{doc['value']}"
    if verify:
        line += ", verified" if doc["verified"] else ", VERIFICATION FAILED"
    _emit(ctx, doc, [line])
    sys.exit(0 if not verify or doc["verified"] else 1)


@main.command()
@click.option("--n", type=int, required=True)
@pass_ctx
def caps(ctx, n):
    """Color-count caps for rainbow-free exact colorings."""
    doc = _post(ctx, "/extremal/caps", {"n": n}).json()
    lines = []
    if "c3" in doc:
        lines.append(f"rainbow-3-chain cap: {doc['c3']}")
    if "b2" in doc:
        lines.append(f"rainbow-diamond cap: {doc['b2']}")
    _emit(ctx, doc, lines)
    sys.exit(0)


@main.command()
@click.argument("claim_id")
@click.option("--params", default="{}", help="JSON object of claim parameters.")
@click.option("--budget", type=int, default=None)
@click.option("--formula-only", is_flag=True, help="Evaluate the formula without searching.")
@click.option("--out", default=None)
@pass_ctx
def claim(ctx, claim_id, params, budget, formula_only, out):
    """Check one quantitative claim: formula vs. fresh search."""
    try:
        params_obj = json.loads(params)
    except json.JSONDecodeError as exc:
        click.echo(f"error: bad --params JSON: {exc}", err=True)
        sys.exit(1)
    if formula_only:
        doc = _post(
            ctx, "/extremal/theorem", {"claim": claim_id, "params": params_obj}
        ).json()
        _emit(ctx, doc, [json.dumps(doc)], out)
        sys.exit(0)
    doc = _post(
        ctx, "/claim", {"claim": claim_id, "params": params_obj, "budget": budget}
    ).json()
    verdict = doc["result"]["verdict"]
    _emit(ctx, doc, [f"claim {claim_id}: {verdict}"], out)
    if verdict == "indeterminate":
        sys.exit(2)
    sys.exit(0 if verdict in ("pass", "formula-only") else 1)


@main.group()
def dimacs():
    """CNF export and model decoding."""


@dimacs.command("export")
@_with_spec_options
@click.option("--out", default=None)
@pass_ctx
def dimacs_export(ctx, n, rainbow, mono, palette, k, mode, out):
    """Emit the avoidance instance as DIMACS CNF."""
    payload = {"spec": _spec_payload(n, rainbow, mono, palette, k, mode)}
    resp = _post(ctx, "/dimacs/export", payload)
    text = resp.text
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        click.echo(text, nl=False)
    sys.exit(0)


@dimacs.command("decode")
@_with_spec_options
@click.option("--model", "model_path", required=True, type=click.Path(exists=True))
@click.option("--out", default=None)
@pass_ctx
def dimacs_decode(ctx, n, rainbow, mono, palette, k, mode, model_path, out):
    """Decode a satisfying assignment back into a coloring."""
    with open(model_path, "r", encoding="utf-8") as fh:
        model_text = fh.read()
    payload = {
        "spec": _spec_payload(n, rainbow, mono, palette, k, mode),
        "model_text": model_text,
    }
    doc = _post(ctx, "/dimacs/decode", payload).json()
    _emit(ctx, doc, [f"decoded coloring accepted: {doc['accepted']}"], out)
    sys.exit(0 if doc["accepted"] else 1)


@main.command()
@click.argument("path", type=click.Path(exists=True))
@pass_ctx
def verify(ctx, path):
    """Re-check a stored result document from scratch."""
    with open(path, "r", encoding="utf-8") as fh:
        document = json.load(fh)
    doc = _post(ctx, "/verify", {"document": document}).json()
    lines = [f"{item['name']}: {item['verdict']}" for item in doc["items"]]
    lines += [f"note: {note}" for note in doc.get("notes", [])]
    lines.append("OK" if doc["ok"] else "FAILED")
    _emit(ctx, doc, lines)
    sys.exit(0 if doc["ok"] else 1)


if __name__ == "__main__":
    main()
