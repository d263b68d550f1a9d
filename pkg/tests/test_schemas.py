"""CLI outputs validate against the schemas in docs/schemas."""

import json
from pathlib import Path

import pytest

from padicfact.cli import main

jsonschema = pytest.importorskip("jsonschema")
referencing = pytest.importorskip("referencing")

SCHEMAS = Path(__file__).resolve().parents[1] / "docs" / "schemas"


@pytest.fixture(scope="module")
def validator_for():
    docs = {p.name: json.loads(p.read_text()) for p in SCHEMAS.glob("*.json")}
    registry = referencing.Registry().with_resources(
        (d["$id"], referencing.Resource.from_contents(d)) for d in docs.values()
    )

    def make(name):
        return jsonschema.Draft202012Validator(docs[name], registry=registry)

    return make


CASES = [
    ("kl.json", ["kl", "--p", "5", "--chi", "omega^2", "--s", "-1"]),
    ("kl.json", ["kl", "--p", "5", "--chi", "omega^2", "--s", "1/2", "--N", "5"]),
    ("stickelberger.json", ["stickelberger", "--p", "5", "--chi", "omega^2", "--s", "-1", "--N", "5", "--M", "16"]),
    ("stickelberger.json", ["gross-rhs", "--p", "5", "--chi", "omega^2", "--D", "-4", "--N", "5", "--M", "16"]),
    ("coleman.json", ["coleman", "--c", "3", "--k", "2", "--p", "5"]),
    ("euler.json", ["euler", "--kind", "adjoint", "--input", '{"f": {"p": 7, "k": 2, "alpha": "2", "beta": "3"}}']),
    ("euler.json", ["euler", "--kind", "identity-8", "--samples", "5"]),
    ("signs.json", ["signs", "--weights", "2", "3", "3", "--finite-prod", "+1"]),
    ("signs.json", ["signs", "--region", "ad", "--eps-f", "-1"]),
    ("quadfield.json", ["quadfield", "--D", "-23", "--p", "3", "--N", "5"]),
    ("leading-term.json", ["leading-term", "--input", '{"ring": {"p": 2, "a": 2}, "matrix": [[2, 1]]}']),
    ("verify.json", ["verify", "--suite", "signs"]),
    ("error.json", ["kl", "--p", "5", "--chi", "omega", "--s", "0"]),
]


@pytest.mark.parametrize("schema,argv", CASES)
def test_cli_output_matches_schema(schema, argv, validator_for, capsys):
    main(argv)
    doc = json.loads(capsys.readouterr().out)
    validator_for(schema).validate(doc)


def test_leading_term_input_matches_schema(validator_for):
    validator_for("leading-term.json").validate({"ring": {"p": 2, "a": 1, "b": 2}, "matrix": [[[0, 1], [0, 1]]]})
