#!/usr/bin/env python3
"""Fit the characters-per-token ratio used for token estimates.

Counts Unicode code points (what the C++ gateway counts) and cl100k_base
tokens over a corpus of NCBI response bodies, and reports the pooled
ratio total_chars / total_tokens.

    tools/calibrate_reference.py --corpus data/fixtures/bodies
    tools/calibrate_reference.py --corpus saved_docs/ --bpe /path/cl100k_base.tiktoken

Without --bpe, tiktoken's own download/cache is used.
"""

import argparse
import base64
import hashlib
import json
import pathlib
import sys
import unittest.mock

import tiktoken
import tiktoken_ext.openai_public as openai_public

CL100K_SHA256 = "223921b76ee99bde995b7ff738513eef100fb51d18c93597a113bcffe865b2a7"


def encoding_from_file(path):
    raw = pathlib.Path(path).read_bytes()
    if hashlib.sha256(raw).hexdigest() != CL100K_SHA256:
        sys.exit(f"{path}: not the cl100k_base vocabulary (hash mismatch)")
    ranks = {}
    for line in raw.splitlines():
        if line:
            token, rank = line.split()
            ranks[base64.b64decode(token)] = int(rank)
    # cl100k_base() would download the vocabulary; take only its pattern and
    # special tokens from the published definition.
    with unittest.mock.patch.object(openai_public, "load_tiktoken_bpe", lambda *a, **k: ranks):
        spec = openai_public.cl100k_base()
    return tiktoken.Encoding(**spec)


def main():
    ap = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("--corpus", required=True, help="directory of response bodies (searched recursively)")
    ap.add_argument("--bpe", help="local cl100k_base.tiktoken file")
    ap.add_argument("--out", help="also write the JSON result here")
    args = ap.parse_args()

    enc = encoding_from_file(args.bpe) if args.bpe else tiktoken.get_encoding("cl100k_base")
    files = sorted(p for p in pathlib.Path(args.corpus).rglob("*") if p.is_file())
    if not files:
        sys.exit(f"{args.corpus}: no documents")

    chars = tokens = 0
    per_doc = []
    for p in files:
        text = p.read_bytes().decode("utf-8", errors="replace")
        c, t = len(text), len(enc.encode(text, disallowed_special=()))
        chars += c
        tokens += t
        if t:
            per_doc.append(c / t)
    per_doc.sort()
    result = {
        "encoding": "cl100k_base",
        "documents": len(files),
        "chars": chars,
        "tokens": tokens,
        "chars_per_token": round(chars / tokens, 4),
        "per_document_median": round(per_doc[len(per_doc) // 2], 4),
        "per_document_range": [round(per_doc[0], 4), round(per_doc[-1], 4)],
    }
    text = json.dumps(result, indent=2)
    print(text)
    if args.out:
        pathlib.Path(args.out).write_text(text + "\n")


if __name__ == "__main__":
    main()
