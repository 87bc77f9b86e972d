#!/usr/bin/env python3
# Builds tests/data/porter2_lexicon.tsv: word<TAB>stem<TAB>restem rows from
# NLTK's English Snowball stemmer, where restem is the stem of the stem. Words are harvested from the docstrings of the
# installed Python packages, plus a handful of irregular forms.
import os
import re
import sys
import sysconfig

from nltk.stem.snowball import SnowballStemmer

EXTRA = """
skis skies dying lying tying idly gently ugly early only singly news howe atlas
cosmos bias andes generate generates generated generating general generally
generic generically generous generously communism communist communities
community arsenal arsenals past universe universal university consign
consigned consigning consignment consist consisted consistency consistent
consistently consisting consists consolation knack knackeries knacks
succeed proceed exceed canning inning outing herring earring cannings
innings outings herrings earrings yelling yelled youth youths sky y ys
aaa caresses ponies ties caress cats feed agreed plastered bled motoring
sing conflated troubled sized hopping tanned falling hissing fizzed failing
filing happy sky relational conditional rational valenci hesitanci digitizer
conformabli radicalli differentli vileli analogousli vietnamization
predication operator feudalism decisiveness hopefulness callousness
formaliti sensitiviti sensibiliti triplicate formative formalize
electriciti electrical hopeful goodness revival allowance inference airliner
gyroscopic adjustable defensible irritant replacement adjustment dependent
adoption homologou communism activate angulariti homologous effective
bowdlerize probate rate cease controll roll
""".split()


def harvest(limit):
    words = set(EXTRA)
    root = sysconfig.get_paths()["purelib"]
    pattern = re.compile(r"\b[a-z][a-z']{1,24}\b")
    for dirpath, _, files in sorted(os.walk(root)):
        for name in sorted(files):
            if not name.endswith(".py"):
                continue
            try:
                with open(os.path.join(dirpath, name), encoding="utf-8") as f:
                    text = f.read()
            except (UnicodeDecodeError, OSError):
                continue
            for w in pattern.findall(text.lower()):
                words.add(w.strip("'"))
            if len(words) >= limit:
                return words
    return words


def main():
    out = sys.argv[1] if len(sys.argv) > 1 else "tests/data/porter2_lexicon.tsv"
    stemmer = SnowballStemmer("english")
    words = sorted(w for w in harvest(30000) if len(w) >= 1 and "'" not in w)
    with open(out, "w", encoding="utf-8") as f:
        for w in words:
            stem = stemmer.stem(w)
            f.write(f"{w}\t{stem}\t{stemmer.stem(stem)}\n")
    print(f"{len(words)} words -> {out}")


if __name__ == "__main__":
    main()
