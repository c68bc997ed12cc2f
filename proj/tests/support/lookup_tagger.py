#!/usr/bin/env python3
"""External tagger adapter used by the tests.

Reads one JSON array of token surfaces per line and answers with one JSON
array of {"surface", "lemma", "upos"} objects per line. Tags come from a
surface lookup over a gold file (token<TAB>UPOS lines); unknown words are
NOUN. Lemmas are the lowercased surfaces.

    lookup_tagger.py GOLD.tsv            normal operation
    lookup_tagger.py GOLD.tsv --short    drops the last token (protocol error)
    lookup_tagger.py GOLD.tsv --exit     exits without answering
"""
import json
import sys


def main():
    gold, mode = sys.argv[1], (sys.argv[2] if len(sys.argv) > 2 else "")
    table = {}
    with open(gold, encoding="utf-8") as f:
        for line in f:
            line = line.rstrip("\n")
            if not line or line.startswith("#"):
                continue
            surface, upos = line.split("\t")
            table.setdefault(surface.lower(), upos)
    for line in sys.stdin:
        if mode == "--exit":
            return
        surfaces = json.loads(line)
        out = [{"surface": s, "lemma": s.lower(), "upos": table.get(s.lower(), "NOUN")} for s in surfaces]
        if mode == "--short":
            out = out[:-1]
        sys.stdout.write(json.dumps(out) + "\n")
        sys.stdout.flush()


if __name__ == "__main__":
    main()
