"""Command-line client for the stepkit service.

The CLI is a thin client: every subcommand builds a request, sends it to
the HTTP service and formats the response.  By default the service runs
in-process, so no server needs to be started; ``--server URL`` points the
same commands at a remote instance instead.

Exit codes: 0 for an affirmative result, 1 for a negative one (rejected
word, unequal languages, failed axiom, exceeded budget), 2 for usage or
format errors.
"""

from __future__ import annotations

import json
import sys
import warnings

import click

NEGATIVE = 1
USAGE = 2


class FormatError(click.ClickException):
    """Usage or format problem; exits with code 2."""

    exit_code = USAGE


class ServiceClient:
    """Sends requests either in-process or to a remote server."""

    def __init__(self, server: str | None = None):
        if server is None:
            with warnings.catch_warnings():
                warnings.simplefilter("ignore")
                from fastapi.testclient import TestClient

                from .service import app

                self._client = TestClient(app)
        else:
            import httpx

            self._client = httpx.Client(base_url=server, timeout=600.0)

    def post(self, path: str, payload: dict) -> dict:
        response = self._client.post(path, json=payload)
        if response.status_code == 400:
            raise FormatError(response.json().get("detail", "bad request"))
        if response.status_code == 422:
            raise FormatError(f"invalid request: {response.text}")
        response.raise_for_status()
        return response.json()


pass_client = click.make_pass_decorator(ServiceClient)


@click.group()
@click.option(
    "--server",
    default=None,
    metavar="URL",
    help="Base URL of a running stepkit service; defaults to in-process.",
)
@click.pass_context
def main(ctx: click.Context, server: str | None) -> None:
    """Pomset languages, step automata and step Turing machines."""
    ctx.obj = ServiceClient(server)


def _write_file(path: str, content: str) -> None:
    with open(path, "w", encoding="utf-8") as handle:
        handle.write(content)


def _read_json_file(path: str) -> dict:
    try:
        with open(path, "r", encoding="utf-8") as handle:
            return json.load(handle)
    except OSError as exc:
        raise FormatError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise FormatError(f"{path} is not valid JSON: {exc}") from exc


@main.command()
@click.argument("expr")
@pass_client
def parse(client: ServiceClient, expr: str) -> None:
    """Parse EXPR and dump its syntax tree."""
    data = client.post("/parse", {"text": expr})
    click.echo(data["text"])
    click.echo(json.dumps(data["tree"], indent=2))


@main.command()
@click.argument("expr")
@click.option("--size", default=4, show_default=True, help="Pomset node bound.")
@pass_client
def lang(client: ServiceClient, expr: str, size: int) -> None:
    """List the bounded language of EXPR, one pomset per line."""
    data = client.post("/lang", {"expr": expr, "size": size})
    for line in data["pomsets"]:
        click.echo(line)


@main.command(name="compile")
@click.argument("expr")
@click.option("--out", type=click.Path(), default=None, help="Write the automaton JSON here.")
@click.option("--dot", type=click.Path(), default=None, help="Write a DOT rendering here.")
@click.option("--width", default=8, show_default=True, help="Parallel-star width cap.")
@pass_client
def compile_cmd(client: ServiceClient, expr: str, out: str | None, dot: str | None, width: int) -> None:
    """Compile EXPR to a step automaton via syntactic derivatives."""
    data = client.post("/compile", {"expr": expr, "width": width})
    click.echo(f"states: {data['states']}")
    click.echo(f"initial: {data['initial']}")
    click.echo(f"well-nested: {'yes' if data['well_nested'] else 'no'}")
    if out:
        _write_file(out, json.dumps(data["automaton"], indent=2) + "\n")
        click.echo(f"wrote {out}")
    if dot:
        _write_file(dot, data["dot"])
        click.echo(f"wrote {dot}")
    if data["cap_engaged"]:
        raise FormatError(
            f"width cap exceeded: parallel-star steps truncated at W={data['width']}"
        )


@main.command()
@click.argument("left")
@click.argument("right")
@click.option("--size", default=4, show_default=True, help="Pomset node bound.")
@pass_client
def equiv(client: ServiceClient, left: str, right: str, size: int) -> None:
    """Compare the bounded languages of two expressions."""
    data = client.post("/equiv", {"left": left, "right": right, "size": size})
    if data["equal"]:
        click.echo(f"equal up to size {size}")
    else:
        click.echo(f"not equal: witness {data['witness']}")
        sys.exit(NEGATIVE)


@main.command()
@click.option("--size", default=4, show_default=True, help="Pomset node bound.")
@click.option("--samples", default=200, show_default=True, help="Instances per axiom.")
@click.option("--seed", default=0, show_default=True, help="Random seed for instances.")
@pass_client
def axioms(client: ServiceClient, size: int, samples: int, seed: int) -> None:
    """Check the algebra's axioms on random instances."""
    data = client.post(
        "/axioms", {"size": size, "samples": samples, "seed": seed}
    )
    for report in data["reports"]:
        status = "holds" if report["status"] == "holds" else "FAILS"
        extra = f", vacuous {report['vacuous']}" if report["kind"] == "cond" else ""
        click.echo(
            f"{report['axiom']:>4}  {status}  "
            f"[{report['kind']}, checked {report['checked']}{extra}]"
        )
        for failure in report["failures"]:
            binding = ", ".join(f"{k}={v}" for k, v in failure["instantiation"].items())
            click.echo(f"      counterexample: {binding}; witness {failure['witness']}")
    if not data["all_hold"]:
        sys.exit(NEGATIVE)


@main.command()
@click.argument("automaton_file", type=click.Path(exists=True))
@click.argument("word")
@click.option("--state", required=True, help="Start state.")
@pass_client
def accept(client: ServiceClient, automaton_file: str, word: str, state: str) -> None:
    """Check whether the automaton accepts a step word (e.g. 'a.<b,c>.d')."""
    payload = {
        "automaton": _read_json_file(automaton_file),
        "state": state,
        "word": word,
    }
    data = client.post("/accept", payload)
    if data["accepted"]:
        click.echo("accepted")
    else:
        click.echo("rejected")
        sys.exit(NEGATIVE)


@main.command()
@click.argument("automaton_file", type=click.Path(exists=True))
@click.option("--state", required=True, help="Start state.")
@click.option("--len", "max_len", default=4, show_default=True, help="Maximum word length.")
@pass_client
def words(client: ServiceClient, automaton_file: str, state: str, max_len: int) -> None:
    """List accepted step words up to a length bound."""
    payload = {
        "automaton": _read_json_file(automaton_file),
        "state": state,
        "max_len": max_len,
    }
    data = client.post("/words", payload)
    for line in data["words"]:
        click.echo(line)


@main.command()
@click.argument("automaton_file", type=click.Path(exists=True))
@click.option("--state", required=True, help="State whose language is extracted.")
@pass_client
def extract(client: ServiceClient, automaton_file: str, state: str) -> None:
    """Extract an expression for the language of a state."""
    payload = {"automaton": _read_json_file(automaton_file), "state": state}
    data = client.post("/extract", payload)
    click.echo(data["expression"])


@main.group()
def stm() -> None:
    """Step Turing machine commands."""


@stm.command(name="run")
@click.argument("machine_file", type=click.Path(exists=True))
@click.option("--input", "input_word", default="", help="Input word over {0,1}.")
@click.option("--max-steps", default=10_000, show_default=True, help="Step budget.")
@click.option("--trace", is_flag=True, help="Render every configuration of the run.")
@pass_client
def stm_run(
    client: ServiceClient, machine_file: str, input_word: str, max_steps: int, trace: bool
) -> None:
    """Run a machine on an input word."""
    payload = {
        "machine": _read_json_file(machine_file),
        "input": input_word,
        "max_steps": max_steps,
        "trace": trace,
    }
    data = client.post("/stm/run", payload)
    if data["status"] == "accepted":
        click.echo(f"accepted {data['output']}")
    else:
        click.echo(data["status"])
    click.echo(f"word: {data['word']}")
    click.echo(f"steps: {data['steps']}")
    if trace and data["trace"]:
        click.echo(data["trace"], nl=False)
    if data["status"] != "accepted":
        sys.exit(NEGATIVE)


@stm.command(name="words")
@click.argument("machine_file", type=click.Path(exists=True))
@click.option("--input", "input_word", default="", help="Input word over {0,1}.")
@click.option("--max-steps", default=100, show_default=True, help="Step budget.")
@pass_client
def stm_words(
    client: ServiceClient, machine_file: str, input_word: str, max_steps: int
) -> None:
    """List the accepting run labels within a step budget."""
    payload = {
        "machine": _read_json_file(machine_file),
        "input": input_word,
        "max_steps": max_steps,
    }
    data = client.post("/stm/words", payload)
    for line in data["words"]:
        click.echo(line)


@main.command()
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--port", default=8000, show_default=True)
def serve(host: str, port: int) -> None:
    """Run the HTTP service."""
    import uvicorn

    uvicorn.run("stepkit.service:app", host=host, port=port)


if __name__ == "__main__":
    main()
