#!/usr/bin/env python3
"""Build the small word2vec-text vector file bundled with the perfreq crate.

Vectors are PPMI + truncated SVD over a co-occurrence matrix collected from
public text available offline (the Python reference documentation topics and
the license texts under /usr/share/common-licenses) plus a handful of
performance-requirement sentences in tools/domain_sentences.txt.

The output is deterministic for a given input text.

    python3 tools/gen_mini_vectors.py > crates/perfreq/data/mini_vectors.txt
"""

import collections
import csv
import glob
import os
import re
import sys

import numpy as np

ROOT = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))
DATA = os.path.join(ROOT, "crates", "perfreq", "data")
DIM = int(os.environ.get("DIM", 50))
VOCAB = 300
WINDOW = int(os.environ.get("WINDOW", 5))
DOMAIN_REPEAT = int(os.environ.get("REPEAT", 5))
NUMBER_RE = re.compile(r"^(\d{1,3}(,\d{3})+|\d+)(\.\d+)?$")


def normalize(tok):
    tok = tok.strip()
    i, j = 0, len(tok)
    while i < j and not tok[i].isalnum():
        i += 1
    while j > i and not tok[j - 1].isalnum():
        j -= 1
    tok = tok[i:j].lower()
    if NUMBER_RE.match(tok):
        return "number"
    return tok


def sentences_from(text):
    for line in re.split(r"[\n.!?]+", text):
        toks = [normalize(t) for t in line.split()]
        toks = [t for t in toks if t]
        if toks:
            yield toks


def load_public_text():
    texts = []
    import pydoc_data.topics as topics

    for key in sorted(topics.topics):
        texts.append(topics.topics[key])
    for path in sorted(glob.glob("/usr/share/common-licenses/*")):
        if os.path.isfile(path):
            with open(path, encoding="utf-8", errors="ignore") as fh:
                texts.append(fh.read())
    return texts


def domain_words():
    words = set(["number"])
    for name in ["patterns.tsv"]:
        with open(os.path.join(DATA, name), encoding="utf-8") as fh:
            for line in fh:
                if line.startswith("#") or not line.strip():
                    continue
                for t in line.split("\t")[0].split():
                    if t != "<N>":
                        words.add(normalize(t))
    for name in ["negation_words.txt", "complement_words.txt", "verbs.txt", "connectives.txt"]:
        with open(os.path.join(DATA, name), encoding="utf-8") as fh:
            for line in fh:
                w = line.strip()
                if w and not w.startswith("#") and normalize(w):
                    words.add(normalize(w))
    for name in ["mini_corpus.csv", "holdout.csv"]:
        with open(os.path.join(DATA, name), encoding="utf-8") as fh:
            for row in csv.DictReader(fh):
                for t in row["text"].split():
                    if normalize(t):
                        words.add(normalize(t))
    return words


def main():
    with open(os.path.join(ROOT, "tools", "domain_sentences.txt"), encoding="utf-8") as fh:
        domain_text = fh.read()
    corpus = []
    for text in load_public_text():
        corpus.extend(sentences_from(text))
    domain = list(sentences_from(domain_text))
    with open(os.path.join(DATA, "mini_corpus.csv"), encoding="utf-8") as fh:
        for row in csv.DictReader(fh):
            domain.extend(sentences_from(row["text"]))
    corpus.extend(domain * DOMAIN_REPEAT)

    freq = collections.Counter(t for s in corpus for t in s)
    required = sorted(w for w in domain_words() if freq[w] > 0)
    vocab = list(required)
    for w, _ in sorted(freq.items(), key=lambda kv: (-kv[1], kv[0])):
        if len(vocab) >= VOCAB:
            break
        if w not in vocab and w.isalpha():
            vocab.append(w)
    vocab = sorted(vocab)
    row_index = {w: i for i, w in enumerate(vocab)}
    contexts = [w for w, _ in sorted(freq.items(), key=lambda kv: (-kv[1], kv[0]))[:4000]]
    col_index = {w: i for i, w in enumerate(contexts)}

    counts = np.zeros((len(vocab), len(contexts)))
    for sent in corpus:
        for i, w in enumerate(sent):
            r = row_index.get(w)
            if r is None:
                continue
            lo, hi = max(0, i - WINDOW), min(len(sent), i + WINDOW + 1)
            for j in range(lo, hi):
                if j == i:
                    continue
                c = col_index.get(sent[j])
                if c is not None:
                    counts[r, c] += 1.0 / abs(i - j)

    total = counts.sum()
    row_sum = counts.sum(axis=1, keepdims=True)
    col_sum = counts.sum(axis=0, keepdims=True) ** 0.75
    col_sum = col_sum / col_sum.sum() * total
    with np.errstate(divide="ignore", invalid="ignore"):
        pmi = np.log((counts * total) / (row_sum * col_sum))
    ppmi = np.where(np.isfinite(pmi) & (pmi > 0), pmi, 0.0)

    u, s, _ = np.linalg.svd(ppmi, full_matrices=False)
    vecs = u[:, :DIM] * np.sqrt(s[:DIM])
    for k in range(DIM):
        col = vecs[:, k]
        if col[np.argmax(np.abs(col))] < 0:
            vecs[:, k] = -col

    out = sys.stdout
    out.write(f"{len(vocab)} {DIM}\n")
    for w in vocab:
        vals = " ".join(f"{x:.6f}" for x in vecs[row_index[w]])
        out.write(f"{w} {vals}\n")
    missing = sorted(w for w in domain_words() if freq[w] == 0)
    if missing:
        print("not in corpus: " + " ".join(missing), file=sys.stderr)


if __name__ == "__main__":
    main()
