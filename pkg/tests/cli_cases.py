"""Subcommand invocations shared by the CLI and acceptance tests."""

import math

from gapsolitons.cli import main
from gapsolitons.tables import read_csv, read_json

COMMANDS = {
    "medium": ["medium"],
    "string": ["string", "--H", "-0.1788854382", "--n", "2", "--band", "lower",
               "--set", "atoms.length=200"],
    "ordinary": ["ordinary", "--n", "2"],
    "gap": ["gap", "--l-max", "3", "--H", "-0.02"],
    "composite": ["composite", "--H", "-0.1", "--n", "3"],
    "vacuum": ["vacuum", "--n", "10", "--set", "rapidity_mode=VACUUM", "--set", "atoms.gamma=0.01"],
}


def run_cli(argv, capsys):
    code = main(argv)
    out = capsys.readouterr()
    return code, out.out, out.err


def same_value(a, b):
    if isinstance(a, float) or isinstance(b, float):
        if isinstance(a, str) or isinstance(b, str):
            return str(a) == str(b) or (math.isnan(float(a)) and math.isnan(float(b)))
        return float(a) == float(b)
    return a == b


def tables_agree(csv_text, json_text):
    ct, jt = read_csv(csv_text), read_json(json_text)
    if [t.name for t in ct] != [t.name for t in jt] and len(ct) > 1:
        return False
    for c, j in zip(ct, jt):
        if c.columns != j.columns or len(c.rows) != len(j.rows):
            return False
        for rc, rj in zip(c.rows, j.rows):
            if not all(same_value(x, y) for x, y in zip(rc, rj)):
                return False
    return True
