"""HTTP face of the decision procedures.

Automata travel as file-format text in request bodies; the service never
touches the filesystem. Input problems come back as status 422 with a
structured detail {"code": "format"|"cap", "message", "line"}, which the
CLI maps to its exit codes.
"""

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse, PlainTextResponse

from .. import counting, omega, sampling, tree_automata, word_automata
from ..errors import CapExceeded, FormatError
from ..trees import Alphabet, format_tree
from ..word_automata import word_str
from . import schemas

app = FastAPI(title="regsparse", version="0.1.0")


def _error_response(code: str, message: str, line=None) -> JSONResponse:
    return JSONResponse(
        status_code=422,
        content={"detail": {"code": code, "message": message, "line": line}},
    )


@app.exception_handler(FormatError)
async def _format_error(_request: Request, exc: FormatError):
    return _error_response("format", exc.message, exc.line)


@app.exception_handler(CapExceeded)
async def _cap_error(_request: Request, exc: CapExceeded):
    return _error_response("cap", str(exc))


@app.exception_handler(ValueError)
async def _value_error(_request: Request, exc: ValueError):
    return _error_response("format", str(exc))


def _verdict_out(verdict: tree_automata.DensityVerdict) -> schemas.VerdictOut:
    return schemas.VerdictOut(
        kind=verdict.kind,
        witness=format_tree(verdict.witness) if verdict.witness is not None else None,
        sink=[str(q) for q in verdict.sink] if verdict.sink is not None else None,
    )


@app.post("/tree/density", response_model=schemas.VerdictOut)
def tree_density(body: schemas.TreeAutomatonIn) -> schemas.VerdictOut:
    aut = tree_automata.parse_tree_automaton(body.automaton)
    return _verdict_out(tree_automata.decide_density(aut, max_states=body.max_subset_states))


@app.post("/tree/witness", response_model=schemas.VerdictOut)
def tree_witness(body: schemas.TreeAutomatonIn) -> schemas.VerdictOut:
    aut = tree_automata.parse_tree_automaton(body.automaton)
    return _verdict_out(tree_automata.decide_density(aut, max_states=body.max_subset_states))


@app.post("/unranked/density", response_model=schemas.VerdictOut)
def unranked_density(body: schemas.TreeAutomatonIn) -> schemas.VerdictOut:
    aut = tree_automata.parse_tree_automaton(body.automaton)
    return _verdict_out(tree_automata.decide_unranked(aut, max_states=body.max_subset_states))


@app.post("/tree/count", response_class=PlainTextResponse)
def tree_count(body: schemas.ProfileIn) -> str:
    aut = tree_automata.parse_tree_automaton(body.automaton)
    dta = tree_automata._coerce_deterministic(aut)
    points = counting.density_profile(dta, body.upto, cap=body.max_profile)
    return counting.profile_csv(points)


@app.post("/tree/estimate", response_model=schemas.EstimateOut)
def tree_estimate(body: schemas.EstimateIn) -> schemas.EstimateOut:
    aut = tree_automata.parse_tree_automaton(body.automaton)
    report = sampling.estimate_tree_density(
        aut, body.size, body.trials, body.seed,
        distribution=body.dist, jobs=body.jobs, max_size=body.max_size,
    )
    return schemas.EstimateOut(
        trials=report.trials, successes=report.successes,
        point=float(report.point), stderr=report.stderr,
    )


@app.post("/tree/sample", response_model=schemas.SampleOut)
def tree_sample(body: schemas.SampleIn) -> schemas.SampleOut:
    alphabet = Alphabet(body.alphabet)
    trees = sampling.sample_trees(
        alphabet, body.size, body.seed, body.count,
        distribution=body.dist, max_size=body.max_size,
    )
    return schemas.SampleOut(trees=[format_tree(t) for t in trees])


@app.post("/word/infix-complete", response_model=schemas.InfixCompleteOut)
def word_infix_complete(body: schemas.DfaIn) -> schemas.InfixCompleteOut:
    dfa = word_automata.parse_dfa(body.dfa)
    if not word_automata.is_infix_complete(dfa):
        return schemas.InfixCompleteOut(infix_complete=False)
    up = word_automata.universal_prefix(dfa)
    return schemas.InfixCompleteOut(infix_complete=True, x=word_str(up.x), k=up.k)


@app.post("/word/universal-prefix", response_model=schemas.UniversalPrefixOut)
def word_universal_prefix(body: schemas.DfaIn) -> schemas.UniversalPrefixOut:
    dfa = word_automata.parse_dfa(body.dfa)
    up = word_automata.universal_prefix(dfa)
    return schemas.UniversalPrefixOut(
        x=word_str(up.x), k=up.k, target_class=[str(q) for q in up.target_class]
    )


@app.post("/word/trap", response_model=schemas.TrapOut)
def word_trap(body: schemas.DfaIn) -> schemas.TrapOut:
    dfa = word_automata.parse_dfa(body.dfa)
    return schemas.TrapOut(v=word_str(word_automata.trapping_word(dfa)))


def _parse_pairs(body: schemas.OmegaIn) -> omega.OmegaRegularLanguage:
    pairs = [
        (word_automata.parse_dfa(p.u), word_automata.parse_dfa(p.v))
        for p in body.pairs
    ]
    return omega.OmegaRegularLanguage(pairs)


@app.post("/omega/measure", response_model=schemas.MeasureOut)
def omega_measure(body: schemas.OmegaIn) -> schemas.MeasureOut:
    verdict = omega.decide_measure(_parse_pairs(body), max_states=body.max_subset_states)
    if verdict.kind == "zero":
        return schemas.MeasureOut(kind="zero")
    w = verdict.witness
    return schemas.MeasureOut(kind="positive", pair=w.pair_index, x=word_str(w.x))


@app.post("/omega/witness", response_model=schemas.OmegaWitnessOut)
def omega_witness(body: schemas.OmegaWitnessIn) -> schemas.OmegaWitnessOut:
    verdict = omega.decide_measure(_parse_pairs(body), max_states=body.max_subset_states)
    if verdict.kind == "zero":
        return schemas.OmegaWitnessOut(kind="zero")
    w = verdict.witness
    validation = None
    if body.validate_spec is not None:
        spec = body.validate_spec
        report = sampling.estimate_marked_recurrence(
            w.loop_automaton, w.w, spec.horizon, spec.trials, spec.seed, jobs=body.jobs
        )
        validation = schemas.WitnessValidationOut(
            trials=report.trials, successes=report.successes,
            point=float(report.point), stderr=report.stderr,
            horizon=spec.horizon, seed=spec.seed,
        )
    return schemas.OmegaWitnessOut(
        kind="positive", pair=w.pair_index, x=word_str(w.x),
        u=word_str(w.u), w=word_str(w.w), marked=str(w.loop_automaton.marked),
        guarantee=w.guarantee, validation=validation,
    )
