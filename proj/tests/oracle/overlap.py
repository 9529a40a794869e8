#!/usr/bin/env python3
"""Exhaustive overlap scoring of two feed files (RSS 2.0 or Atom).

Prints every cross pair at or above the weak threshold, the greedy one-to-one
strong pairing, and both overlap percentages.

    overlap.py LEFT RIGHT [--n 10]
"""
import argparse
import html
import re
import sys
import xml.etree.ElementTree as ET
from fractions import Fraction

sys.path.insert(0, __file__.rsplit("/", 1)[0])
from walkthrough import STOPWORDS, words  # noqa: E402

ATOM = "{http://www.w3.org/2005/Atom}"


def text_of(s):
    s = re.sub(r"<[A-Za-z/!][^>]*>", "", s or "")
    s = html.unescape(s)
    return " ".join(s.split())


def read(path):
    root = ET.parse(path).getroot()
    out = []
    if root.tag == "rss":
        for it in root.iter("item"):
            if it.findtext("pubDate") is None:
                continue
            out.append((it.findtext("guid").strip(), text_of(it.findtext("title")),
                        text_of(it.findtext("description"))))
    else:
        for e in root.iter(ATOM + "entry"):
            out.append((e.findtext(ATOM + "id").strip(), text_of(e.findtext(ATOM + "title")),
                        text_of(e.findtext(ATOM + "summary"))))
    return out


def keywords(text, n):
    freq = {}
    for w in words(text):
        if w not in STOPWORDS:
            freq[w] = freq.get(w, 0) + 1
    return {w for w, _ in sorted(freq.items(), key=lambda kv: (-kv[1], kv[0]))[:n]}


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("left")
    ap.add_argument("right")
    ap.add_argument("--n", type=int, default=10)
    a = ap.parse_args()
    left = [(i, keywords(t + " " + b, a.n)) for i, t, b in read(a.left)]
    right = [(i, keywords(t + " " + b, a.n)) for i, t, b in read(a.right)]

    scored = []
    for li, lk in left:
        for ri, rk in right:
            u = lk | rk
            s = Fraction(len(lk & rk), len(u)) if u else Fraction(0)
            if s >= Fraction(1, 4):
                cls = "strong" if s > Fraction(33, 100) else "weak"
                scored.append((s, li, ri, cls))
                print("%s %s %s/%s %.6f %s" % (li, ri, s.numerator, s.denominator, float(s), cls))

    used_l, used_r, pairs = set(), set(), []
    for s, li, ri, cls in sorted(scored, key=lambda x: (-x[0], min(x[1], x[2]), max(x[1], x[2]), x[1], x[2])):
        if cls != "strong" or li in used_l or ri in used_r:
            continue
        used_l.add(li)
        used_r.add(ri)
        pairs.append((li, ri, s))
    print("pairs:")
    for li, ri, s in pairs:
        print("  %s %s %s/%s" % (li, ri, s.numerator, s.denominator))
    print("left %d/%d = %.1f%%" % (len(pairs), len(left), 100.0 * len(pairs) / len(left)))
    print("right %d/%d = %.1f%%" % (len(pairs), len(right), 100.0 * len(pairs) / len(right)))


if __name__ == "__main__":
    main()
