#!/usr/bin/env python3
# Copyright 2026 The arm-forge Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#  http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""Regenerates the *_counts.csv side files by exhaustive scan.

Every itemset that picks at most one value per attribute is listed, zero
counts included. Run from this directory; the output is committed.
"""

import csv
import itertools
import sys

FIXTURES = ["measure5", "cpir25", "separable", "pruning"]


def load(name):
    with open(f"{name}.csv", newline="") as f:
        rows = list(csv.reader(f))
    header, body = rows[0], rows[1:]
    items = [[f"{h}={v}" for h, v in zip(header, r)] for r in body]
    values = [sorted({r[i] for r in body}) for i in range(len(header))]
    return header, values, [set(r) for r in items]


def expected_counts(name):
    header, values, rows = load(name)
    out = []
    choices = [[None] + [f"{h}={v}" for v in vs] for h, vs in zip(header, values)]
    for combo in itertools.product(*choices):
        itemset = [c for c in combo if c is not None]
        count = sum(1 for r in rows if all(i in r for i in itemset))
        out.append((" & ".join(itemset), count))
    out.sort(key=lambda p: (p[0].count(" & ") + (1 if p[0] else 0), p[0]))
    return out


def pruning_trace(min_prob=0.2, min_count=4):
    """Level-wise shrinkage of the pruning fixture, straight from the rules:
    drop items below min_prob, then after each level keep only items of
    frequent k-itemsets and rows that still hold k+1 items."""
    _, _, rows = load("pruning")
    n = len(rows)
    steps = []

    def record(it, rs):
        items = set().union(*rs) if rs else set()
        steps.append((it, len(rs), len(items), sum(len(r) for r in rs)))

    record(0, rows)
    singles = {i for r in rows for i in r}
    keep = {i for i in singles if sum(i in r for r in rows) / n >= min_prob}
    work = [r & keep for r in rows]
    work = [r for r in work if r]
    record(1, work)

    level = [frozenset([i]) for i in sorted(keep) if sum(i in r for r in rows) >= min_count]
    k = 1
    while level:
        alive = set().union(*level)
        work = [r & alive for r in work]
        work = [r for r in work if len(r) > k]
        record(k + 1, work)
        cands = set()
        for a, b in itertools.combinations(level, 2):
            u = a | b
            attrs = [x.split("=")[0] for x in u]
            if len(u) == k + 1 and len(set(attrs)) == len(attrs):
                if all(frozenset(s) in set(level) for s in itertools.combinations(u, k)):
                    cands.add(u)
        level = [c for c in cands if sum(c <= r for r in rows) >= min_count]
        k += 1
    return steps


def main():
    for name in FIXTURES:
        with open(f"{name}_counts.csv", "w", newline="") as f:
            w = csv.writer(f, lineterminator="\n")
            w.writerow(["itemset", "count"])
            w.writerows(expected_counts(name))
    with open("pruning_trace.csv", "w", newline="") as f:
        w = csv.writer(f, lineterminator="\n")
        w.writerow(["iteration", "rows", "items", "occurrences"])
        w.writerows(pruning_trace())
    return 0


if __name__ == "__main__":
    sys.exit(main())
