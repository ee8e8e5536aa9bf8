"""HTTP service exposing the toolkit as JSON request/response endpoints.

Every operation is a pure computation, so each endpoint is a POST taking a
small pydantic model and returning one.  Malformed notation or descriptions
yield HTTP 400 with a detail message; negative verdicts (languages differ,
word rejected, run out of budget) are ordinary 200 responses that carry the
verdict, since they are results rather than errors.
"""

from __future__ import annotations

from fastapi import FastAPI, HTTPException
from pydantic import BaseModel, Field

from . import __version__
from .automaton import AutomatonFormatError, StepAutomaton, words_sorted
from .axioms import axiom_ids, run_suite
from .expr import (
    One,
    Par,
    ParStar,
    ParseError,
    Seq,
    SprExpr,
    Star,
    Sum,
    Sym,
    Zero,
    equiv_bounded,
    parse,
    semantics,
)
from .kleene import DEFAULT_WIDTH, compile_expr, extract
from .language import PomsetLanguage
from .pomset import PomsetNotationError, parse_step_word, format_step_word
from .stm import (
    MachineFormatError,
    MachineRuntimeError,
    Stm,
    accepted_words_upto,
    render_trace,
    run,
)

app = FastAPI(
    title="stepkit",
    description="Pomset languages, step automata and step Turing machines",
    version=__version__,
)

_BAD_INPUT = (
    ParseError,
    PomsetNotationError,
    AutomatonFormatError,
    MachineFormatError,
    MachineRuntimeError,
    ValueError,
    KeyError,
)


def _guard(fn, *args, **kwargs):
    try:
        return fn(*args, **kwargs)
    except _BAD_INPUT as exc:
        raise HTTPException(status_code=400, detail=str(exc)) from exc


def expr_to_dict(x: SprExpr) -> dict:
    if isinstance(x, Zero):
        return {"node": "zero"}
    if isinstance(x, One):
        return {"node": "one"}
    if isinstance(x, Sym):
        return {"node": "letter", "letter": x.letter}
    if isinstance(x, Sum):
        return {"node": "sum", "left": expr_to_dict(x.left), "right": expr_to_dict(x.right)}
    if isinstance(x, Seq):
        return {"node": "seq", "left": expr_to_dict(x.left), "right": expr_to_dict(x.right)}
    if isinstance(x, Par):
        return {"node": "par", "left": expr_to_dict(x.left), "right": expr_to_dict(x.right)}
    if isinstance(x, Star):
        return {"node": "star", "arg": expr_to_dict(x.arg)}
    if isinstance(x, ParStar):
        return {"node": "parstar", "arg": expr_to_dict(x.arg)}
    raise TypeError(f"not an expression: {x!r}")


# -- models -----------------------------------------------------------------


class ParseRequest(BaseModel):
    text: str


class ParseResponse(BaseModel):
    text: str
    tree: dict


class LangRequest(BaseModel):
    expr: str
    size: int = Field(default=4, ge=0)


class LangResponse(BaseModel):
    pomsets: list[str]
    count: int


class CompileRequest(BaseModel):
    expr: str
    width: int = Field(default=DEFAULT_WIDTH, ge=1)


class CompileResponse(BaseModel):
    automaton: dict
    initial: str
    states: int
    well_nested: bool
    cap_engaged: bool
    width: int
    dot: str


class EquivRequest(BaseModel):
    left: str
    right: str
    size: int = Field(default=4, ge=0)


class EquivResponse(BaseModel):
    equal: bool
    witness: str | None = None


class AxiomsRequest(BaseModel):
    size: int = Field(default=4, ge=0)
    samples: int = Field(default=200, ge=1)
    seed: int = 0
    ids: list[str] | None = None


class AxiomFailureModel(BaseModel):
    instantiation: dict[str, str]
    witness: str


class AxiomReportModel(BaseModel):
    axiom: str
    kind: str
    checked: int
    vacuous: int
    status: str
    failures: list[AxiomFailureModel]


class AxiomsResponse(BaseModel):
    reports: list[AxiomReportModel]
    all_hold: bool


class AcceptRequest(BaseModel):
    automaton: dict
    state: str
    word: str


class AcceptResponse(BaseModel):
    accepted: bool


class WordsRequest(BaseModel):
    automaton: dict
    state: str
    max_len: int = Field(default=4, ge=0)


class WordsResponse(BaseModel):
    words: list[str]


class ExtractRequest(BaseModel):
    automaton: dict
    state: str


class ExtractResponse(BaseModel):
    expression: str


class StmRunRequest(BaseModel):
    machine: dict
    input: str = ""
    max_steps: int = Field(default=10_000, ge=0)
    mode: str = "first-accept"
    trace: bool = False


class StmRunResponse(BaseModel):
    status: str
    output: str | None
    word: str
    steps: int
    trace: str | None = None


class StmWordsRequest(BaseModel):
    machine: dict
    input: str = ""
    max_steps: int = Field(default=100, ge=0)


class StmWordsResponse(BaseModel):
    words: list[str]


# -- endpoints ---------------------------------------------------------------


@app.get("/")
def index() -> dict:
    return {
        "service": "stepkit",
        "version": __version__,
        "endpoints": sorted(
            route.path for route in app.routes if route.path.startswith("/")
        ),
    }


@app.post("/parse", response_model=ParseResponse)
def parse_endpoint(req: ParseRequest) -> ParseResponse:
    tree = _guard(parse, req.text)
    return ParseResponse(text=str(tree), tree=expr_to_dict(tree))


@app.post("/lang", response_model=LangResponse)
def lang_endpoint(req: LangRequest) -> LangResponse:
    expr = _guard(parse, req.expr)
    language: PomsetLanguage = semantics(expr, req.size)
    texts = language.sorted_texts()
    return LangResponse(pomsets=texts, count=len(texts))


@app.post("/compile", response_model=CompileResponse)
def compile_endpoint(req: CompileRequest) -> CompileResponse:
    expr = _guard(parse, req.expr)
    result = _guard(compile_expr, expr, req.width)
    return CompileResponse(
        automaton=result.automaton.to_json_dict(),
        initial=result.state,
        states=len(result.automaton.states),
        well_nested=result.automaton.is_well_nested(),
        cap_engaged=result.cap_engaged,
        width=result.width,
        dot=result.automaton.to_dot(),
    )


@app.post("/equiv", response_model=EquivResponse)
def equiv_endpoint(req: EquivRequest) -> EquivResponse:
    left = _guard(parse, req.left)
    right = _guard(parse, req.right)
    equal, witness = equiv_bounded(left, right, req.size)
    witness_text = None
    if witness is not None:
        try:
            witness_text = witness.to_text()
        except ValueError:
            witness_text = repr(witness)
    return EquivResponse(equal=equal, witness=witness_text)


@app.post("/axioms", response_model=AxiomsResponse)
def axioms_endpoint(req: AxiomsRequest) -> AxiomsResponse:
    if req.ids is not None:
        unknown = set(req.ids) - set(axiom_ids())
        if unknown:
            raise HTTPException(400, f"unknown axiom ids: {sorted(unknown)}")
    reports = run_suite(req.size, req.samples, req.seed, req.ids)
    models = [
        AxiomReportModel(
            axiom=r.axiom_id,
            kind=r.kind,
            checked=r.instances_checked,
            vacuous=r.vacuous,
            status="holds" if r.holds else "fails",
            failures=[
                AxiomFailureModel(instantiation=f.instantiation, witness=f.witness)
                for f in r.failures
            ],
        )
        for r in reports
    ]
    return AxiomsResponse(reports=models, all_hold=all(r.holds for r in reports))


@app.post("/accept", response_model=AcceptResponse)
def accept_endpoint(req: AcceptRequest) -> AcceptResponse:
    automaton = _guard(StepAutomaton.from_json_dict, req.automaton)
    word = _guard(parse_step_word, req.word)
    return AcceptResponse(accepted=_guard(automaton.accepts, req.state, word))


@app.post("/words", response_model=WordsResponse)
def words_endpoint(req: WordsRequest) -> WordsResponse:
    automaton = _guard(StepAutomaton.from_json_dict, req.automaton)
    words = _guard(automaton.language_upto, req.state, req.max_len)
    return WordsResponse(words=words_sorted(words))


@app.post("/extract", response_model=ExtractResponse)
def extract_endpoint(req: ExtractRequest) -> ExtractResponse:
    automaton = _guard(StepAutomaton.from_json_dict, req.automaton)
    return ExtractResponse(expression=str(_guard(extract, automaton, req.state)))


@app.post("/stm/run", response_model=StmRunResponse)
def stm_run_endpoint(req: StmRunRequest) -> StmRunResponse:
    machine = _guard(Stm.from_json_dict, req.machine)
    outcome = _guard(
        run, machine, req.input, req.max_steps, req.mode, want_trace=req.trace
    )
    trace_text = None
    if req.trace and outcome.trace is not None:
        trace_text = render_trace(machine, outcome.trace, req.input)
    return StmRunResponse(
        status=outcome.status,
        output=outcome.output,
        word=format_step_word(outcome.word),
        steps=outcome.steps_used,
        trace=trace_text,
    )


@app.post("/stm/words", response_model=StmWordsResponse)
def stm_words_endpoint(req: StmWordsRequest) -> StmWordsResponse:
    machine = _guard(Stm.from_json_dict, req.machine)
    words = _guard(accepted_words_upto, machine, req.input, req.max_steps)
    return StmWordsResponse(words=sorted(format_step_word(w) for w in words))
