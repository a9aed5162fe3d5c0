#!/usr/bin/env python3
"""Parse the sentence-polarity movie corpus into labelled CoNLL-U.

Reads rt-polarity.pos / rt-polarity.neg (latin-1, one sentence per line)
from DIR and writes DIR/movie.conllu with "# sent_id" and "# label" comments,
which `sentikit ingest` and the movie acceptance run read directly.

Needs spaCy and an English model:
    pip install spacy && python -m spacy download en_core_web_sm
"""

import argparse
import pathlib
import sys


def sentence_rows(doc):
    # Merge the whole line into one tree: extra sentence roots attach to the
    # first root as parataxis so every review keeps a single tree.
    first_root = None
    rows = []
    for tok in doc:
        if tok.dep_ == "ROOT":
            if first_root is None:
                first_root = tok.i
                head, dep = 0, "root"
            else:
                head, dep = first_root + 1, "parataxis"
        else:
            head, dep = tok.head.i + 1, tok.dep_.lower()
        form = tok.text.replace("\t", " ").strip() or "_"
        lemma = tok.lemma_.replace("\t", " ").strip() or "_"
        rows.append([str(tok.i + 1), form, lemma, tok.pos_ or "X", tok.tag_ or "_",
                     "_", str(head), dep, "_", "_"])
    return rows


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("dir", type=pathlib.Path)
    ap.add_argument("--model", default="en_core_web_sm")
    ap.add_argument("--out", type=pathlib.Path)
    args = ap.parse_args()

    try:
        import spacy
    except ImportError:
        sys.exit("spaCy is not installed")
    nlp = spacy.load(args.model, disable=["ner"])

    out = args.out or args.dir / "movie.conllu"
    with open(out, "w", encoding="utf-8") as f:
        for label, name in (("positive", "rt-polarity.pos"),
                            ("negative", "rt-polarity.neg")):
            lines = (args.dir / name).read_text(encoding="latin-1").splitlines()
            lines = [l.strip() for l in lines if l.strip()]
            for n, doc in enumerate(nlp.pipe(lines, batch_size=256)):
                rows = sentence_rows(doc)
                if not rows:
                    continue
                f.write(f"# sent_id = {label[:3]}{n:05d}\n# label = {label}\n")
                for r in rows:
                    f.write("\t".join(r) + "\n")
                f.write("\n")
    print(f"wrote {out}", file=sys.stderr)


if __name__ == "__main__":
    main()
