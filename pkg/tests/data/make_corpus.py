"""Regenerates the pinned CSV/JSON/XML corpus used by the property suites.

Run from the repository root: ``python tests/data/make_corpus.py``.
"""

from __future__ import annotations

import csv
import io
import json
import random
from pathlib import Path

OUT = Path(__file__).parent / "corpus"
WORDS = ["Laura", "Grey", "Craig", "x", "1", "2", "name"]
KEYS = ["name", "a", "b", "items", "id"]
TAGS = ["TEAM", "PLAYER", "COACH"]
ATTRS = ["name", "id"]


def csv_text(rng: random.Random) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    cols = rng.randint(1, 4)
    for _ in range(rng.randint(1, 5)):
        w.writerow(rng.choice(WORDS) for _ in range(cols))
    return buf.getvalue()


def json_value(rng: random.Random, depth: int) -> object:
    roll = rng.random()
    if depth > 0 and roll < 0.3:
        return {k: json_value(rng, depth - 1) for k in rng.sample(KEYS, rng.randint(0, 3))}
    if depth > 0 and roll < 0.5:
        return [json_value(rng, depth - 1) for _ in range(rng.randint(0, 3))]
    return rng.choice(["Laura", "Grey", 1, 2, True, "x"])


def json_text(rng: random.Random) -> str:
    top: object = (
        {k: json_value(rng, 3) for k in rng.sample(KEYS, rng.randint(1, 4))}
        if rng.random() < 0.7
        else [json_value(rng, 3) for _ in range(rng.randint(0, 4))]
    )
    return json.dumps(top, indent=1) + "\n"


def xml_element(rng: random.Random, depth: int) -> str:
    tag = rng.choice(TAGS)
    attrs = "".join(f' {a}="{rng.choice(WORDS)}"' for a in rng.sample(ATTRS, rng.randint(0, 2)))
    body = []
    for _ in range(rng.randint(0, 3) if depth > 0 else 0):
        body.append(xml_element(rng, depth - 1) if rng.random() < 0.7 else rng.choice(WORDS))
    return f"<{tag}{attrs}>{''.join(body)}</{tag}>"


def main() -> None:
    OUT.mkdir(exist_ok=True)
    rng = random.Random(20240501)
    (OUT / "example1.csv").write_text(
        "email,name,surname\n"
        "laura@example.com,Laura,Grey\n"
        "craig@example.com,Craig,Johnson\n"
        "mary@example.com,Mary,Jenkins\n"
        "jamie@example.com,Jamie,Smith\n"
    )
    (OUT / "nested.json").write_text('{"a": 1, "b": [1, 2, 3]}\n')
    (OUT / "team.xml").write_text(
        '<TEAM name="Chicago Bulls"><PLAYER name="Michael Jordan"/>'
        '<PLAYER name="Scottie Pippen"/></TEAM>\n'
    )
    for i in range(1, 16):
        (OUT / f"gen{i:02d}.csv").write_text(csv_text(rng))
    for i in range(1, 18):
        (OUT / f"gen{i:02d}.json").write_text(json_text(rng))
    for i in range(1, 16):
        (OUT / f"gen{i:02d}.xml").write_text(xml_element(rng, 3) + "\n")


if __name__ == "__main__":
    main()
