"""Command-line client for the decision service.

Every subcommand is a thin HTTP client: by default it mounts the FastAPI app
in-process (one-shot, no daemon), with ``--server URL`` it talks to a running
instance instead. Results are printed as single-line JSON on stdout (CSV for
profiles, one literal per line for samples); diagnostics go to stderr.

Exit codes: 0 success, 2 malformed input (message names file, line and
reason), 3 resource cap exceeded.
"""

from __future__ import annotations

import asyncio
import json
import sys
from pathlib import Path

import click
import httpx

from .errors import FormatError
from .omega import parse_omega_file

DEFAULT_SUBSET_CAP = 2**16
DEFAULT_PROFILE_CAP = 200
DEFAULT_SAMPLE_CAP = 10**6


async def _asgi_post(path: str, payload: dict) -> httpx.Response:
    from .service import app

    transport = httpx.ASGITransport(app=app)
    async with httpx.AsyncClient(
        transport=transport, base_url="http://regsparse.local", timeout=None
    ) as client:
        return await client.post(path, json=payload)


def _request(server: str | None, path: str, payload: dict, context: str) -> httpx.Response:
    try:
        if server:
            resp = httpx.post(server.rstrip("/") + path, json=payload, timeout=600.0)
        else:
            resp = asyncio.run(_asgi_post(path, payload))
    except httpx.HTTPError as exc:
        click.echo(f"{context}: service request failed: {exc}", err=True)
        sys.exit(2)
    if resp.status_code != 200:
        _report_failure(resp, context)
    return resp


def _report_failure(resp: httpx.Response, context: str):
    code = "format"
    message = resp.text
    line = None
    try:
        detail = resp.json().get("detail")
        if isinstance(detail, dict):
            code = detail.get("code", "format")
            message = detail.get("message", message)
            line = detail.get("line")
        elif detail is not None:
            message = json.dumps(detail)
    except ValueError:
        pass
    location = f"{context}:{line}" if line else context
    click.echo(f"{location}: {message}", err=True)
    sys.exit(3 if code == "cap" else 2)


def _read_text(path: str) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        click.echo(f"{path}: {exc.strerror or exc}", err=True)
        sys.exit(2)


def _emit(pairs):
    """Print one JSON object with the documented key order."""
    click.echo(json.dumps(dict(pairs), separators=(",", ":")))


def _parse_triple(text: str, what: str, names: str):
    parts = text.split(",")
    if len(parts) != 3:
        raise click.UsageError(f"--{what} expects '{names}'")
    try:
        values = tuple(int(p) for p in parts)
    except ValueError:
        raise click.UsageError(f"--{what} expects three integers '{names}'")
    if any(v < 0 for v in values):
        raise click.UsageError(f"--{what} values must be non-negative")
    return values


_subset_cap = click.option(
    "--max-subset-states", default=DEFAULT_SUBSET_CAP, show_default=True,
    help="Cap on states created by subset constructions.",
)
_jobs = click.option(
    "--jobs", default=1, show_default=True,
    help="Worker count for Monte-Carlo trials; never changes results.",
)


@click.group()
@click.option(
    "--server", default=None, metavar="URL",
    help="Base URL of a running regsparse service; default runs in-process.",
)
@click.pass_context
def main(ctx, server):
    """Sparseness decisions for regular tree and omega languages."""
    ctx.obj = server


@main.group()
def tree():
    """Regular languages of labelled binary trees."""


@tree.command("density")
@click.argument("automaton_file", metavar="AUTOMATON_FILE")
@click.option("--mc", default=None, metavar="TRIALS,N,SEED",
              help="Monte-Carlo estimate instead of the exact verdict.")
@click.option("--dist", type=click.Choice(["uniform", "bst"]), default="uniform",
              show_default=True, help="Sampling distribution for --mc.")
@_jobs
@_subset_cap
@click.pass_obj
def tree_density(server, automaton_file, mc, dist, jobs, max_subset_states):
    """Decide whether the tree language is sparse, dense, or neither."""
    text = _read_text(automaton_file)
    if mc is None:
        resp = _request(server, "/tree/density",
                        {"automaton": text, "max_subset_states": max_subset_states},
                        automaton_file)
        data = resp.json()
        _emit([("kind", data["kind"]), ("witness", data["witness"]), ("sink", data["sink"])])
        return
    trials, size, seed = _parse_triple(mc, "mc", "trials,n,seed")
    resp = _request(server, "/tree/estimate",
                    {"automaton": text, "size": size, "trials": trials,
                     "seed": seed, "dist": dist, "jobs": jobs},
                    automaton_file)
    data = resp.json()
    _emit([("trials", data["trials"]), ("successes", data["successes"]),
           ("point", data["point"]), ("stderr", data["stderr"])])


@tree.command("witness")
@click.argument("automaton_file", metavar="AUTOMATON_FILE")
@_subset_cap
@click.pass_obj
def tree_witness(server, automaton_file, max_subset_states):
    """Print the verdict with its forbidden or forcing subtree."""
    text = _read_text(automaton_file)
    resp = _request(server, "/tree/witness",
                    {"automaton": text, "max_subset_states": max_subset_states},
                    automaton_file)
    data = resp.json()
    _emit([("kind", data["kind"]), ("witness", data["witness"]), ("sink", data["sink"])])


@tree.command("count")
@click.argument("automaton_file", metavar="AUTOMATON_FILE")
@click.option("--exact-upto", default=40, show_default=True,
              help="Largest size in the exact density profile.")
@click.option("--max-profile", default=DEFAULT_PROFILE_CAP, show_default=True,
              help="Cap on the profile size.")
@click.pass_obj
def tree_count(server, automaton_file, exact_upto, max_profile):
    """Exact density profile as CSV (n,accepted,total,ratio)."""
    text = _read_text(automaton_file)
    resp = _request(server, "/tree/count",
                    {"automaton": text, "upto": exact_upto, "max_profile": max_profile},
                    automaton_file)
    click.echo(resp.text, nl=False)


@tree.command("sample")
@click.option("--alphabet", required=True, metavar="A,B,...",
              help="Comma-separated alphabet symbols.")
@click.option("--size", required=True, type=int, help="Number of nodes per tree.")
@click.option("--count", default=1, show_default=True, help="How many trees to emit.")
@click.option("--seed", default=0, show_default=True, help="Master seed (u64).")
@click.option("--dist", type=click.Choice(["uniform", "bst"]), default="uniform",
              show_default=True, help="Sampling distribution.")
@click.option("--max-size", default=DEFAULT_SAMPLE_CAP, show_default=True,
              help="Cap on the sample size.")
@click.pass_obj
def tree_sample(server, alphabet, size, count, seed, dist, max_size):
    """Emit random trees, one literal per line."""
    symbols = [s.strip() for s in alphabet.split(",") if s.strip()]
    resp = _request(server, "/tree/sample",
                    {"alphabet": symbols, "size": size, "count": count,
                     "seed": seed, "dist": dist, "max_size": max_size},
                    "tree sample")
    for literal in resp.json()["trees"]:
        click.echo(literal)


@main.group()
def unranked():
    """Regular languages of unranked trees via the flat encoding."""


@unranked.command("density")
@click.argument("automaton_file", metavar="AUTOMATON_FILE")
@_subset_cap
@click.pass_obj
def unranked_density(server, automaton_file, max_subset_states):
    """Decide unranked sparseness; the witness encodes the missing subtree."""
    text = _read_text(automaton_file)
    resp = _request(server, "/unranked/density",
                    {"automaton": text, "max_subset_states": max_subset_states},
                    automaton_file)
    data = resp.json()
    _emit([("kind", data["kind"]), ("witness", data["witness"]), ("sink", data["sink"])])


@main.group()
def word():
    """DFAs over finite words."""


@word.command("infix-complete")
@click.argument("dfa_file", metavar="DFA_FILE")
@click.pass_obj
def word_infix_complete(server, dfa_file):
    """Decide infix completeness; reports the universal prefix when true."""
    text = _read_text(dfa_file)
    resp = _request(server, "/word/infix-complete", {"dfa": text}, dfa_file)
    data = resp.json()
    pairs = [("infix_complete", data["infix_complete"])]
    if data["infix_complete"]:
        pairs += [("x", data["x"]), ("k", data["k"])]
    _emit(pairs)


@word.command("universal-prefix")
@click.argument("dfa_file", metavar="DFA_FILE")
@click.pass_obj
def word_universal_prefix(server, dfa_file):
    """Universal prefix x and completion bound k of an infix-complete DFA."""
    text = _read_text(dfa_file)
    resp = _request(server, "/word/universal-prefix", {"dfa": text}, dfa_file)
    data = resp.json()
    _emit([("x", data["x"]), ("k", data["k"]), ("target_class", data["target_class"])])


@word.command("trap")
@click.argument("dfa_file", metavar="DFA_FILE")
@click.pass_obj
def word_trap(server, dfa_file):
    """A word driving every state into a closed reachability class."""
    text = _read_text(dfa_file)
    resp = _request(server, "/word/trap", {"dfa": text}, dfa_file)
    _emit([("v", resp.json()["v"])])


@main.group()
def omega():
    """Omega-regular languages given as unions of U V^omega pairs."""


def _load_pairs(omega_file: str):
    text = _read_text(omega_file)
    try:
        path_pairs = parse_omega_file(text)
    except FormatError as exc:
        location = f"{omega_file}:{exc.line}" if exc.line else omega_file
        click.echo(f"{location}: {exc.message}", err=True)
        sys.exit(2)
    base = Path(omega_file).parent
    pairs = []
    for u_path, v_path in path_pairs:
        u_text = _read_text(str((base / u_path)))
        v_text = _read_text(str((base / v_path)))
        pairs.append({"u": u_text, "v": v_text})
    return pairs


@omega.command("measure")
@click.argument("omega_file", metavar="OMEGA_FILE")
@_subset_cap
@click.pass_obj
def omega_measure(server, omega_file, max_subset_states):
    """Decide whether the language has measure zero or positive measure."""
    pairs = _load_pairs(omega_file)
    resp = _request(server, "/omega/measure",
                    {"pairs": pairs, "max_subset_states": max_subset_states},
                    omega_file)
    data = resp.json()
    out = [("kind", data["kind"])]
    if data["kind"] == "positive":
        out += [("pair", data["pair"]), ("x", data["x"])]
    _emit(out)


@omega.command("witness")
@click.argument("omega_file", metavar="OMEGA_FILE")
@click.option("--validate", "validate_spec", default=None, metavar="TRIALS,HORIZON,SEED",
              help="Also report the empirical marked-visit frequency.")
@_jobs
@_subset_cap
@click.pass_obj
def omega_witness(server, omega_file, validate_spec, jobs, max_subset_states):
    """Positive-measure witness: cylinder prefix and loop automaton."""
    pairs = _load_pairs(omega_file)
    payload = {"pairs": pairs, "max_subset_states": max_subset_states, "jobs": jobs}
    if validate_spec is not None:
        trials, horizon, seed = _parse_triple(validate_spec, "validate", "trials,horizon,seed")
        payload["validate_spec"] = {"trials": trials, "horizon": horizon, "seed": seed}
    resp = _request(server, "/omega/witness", payload, omega_file)
    data = resp.json()
    out = [("kind", data["kind"])]
    if data["kind"] == "positive":
        out += [("pair", data["pair"]), ("x", data["x"]), ("u", data["u"]),
                ("w", data["w"]), ("marked", data["marked"]),
                ("guarantee", data["guarantee"])]
        if data.get("validation") is not None:
            v = data["validation"]
            out.append(("validation", {
                "trials": v["trials"], "successes": v["successes"],
                "point": v["point"], "stderr": v["stderr"],
                "horizon": v["horizon"], "seed": v["seed"],
            }))
    _emit(out)


if __name__ == "__main__":
    main()
