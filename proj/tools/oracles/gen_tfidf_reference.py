#!/usr/bin/env python3
# Builds tests/data/tfidf_reference.json from scikit-learn: vocabulary, idf
# and transformed rows of TfidfVectorizer on pre-tokenised documents, and
# MultinomialNB posteriors on the unigram matrix.
import json
import sys

import numpy as np
from sklearn.feature_extraction.text import TfidfVectorizer
from sklearn.naive_bayes import MultinomialNB

VOCAB = ["vote", "elect", "sale", "shoe", "pizza", "senat", "tax", "free", "ship", "ralli",
         "donat", "coupon", "health", "travel", "café", "über"]


def docs(rng, n):
    out = []
    for _ in range(n):
        length = int(rng.integers(1, 9))
        out.append([VOCAB[int(i)] for i in rng.integers(0, len(VOCAB), size=length)])
    return out


def case(train, test, ngram_max, min_df):
    vec = TfidfVectorizer(tokenizer=str.split, token_pattern=None, lowercase=False,
                          ngram_range=(1, ngram_max), min_df=min_df, norm="l2",
                          use_idf=True, smooth_idf=True, sublinear_tf=False)
    vec.fit([" ".join(d) for d in train])
    terms = list(vec.get_feature_names_out())

    def rows(ds):
        m = vec.transform([" ".join(d) for d in ds]).tocsr()
        out = []
        for r in range(m.shape[0]):
            row = m.getrow(r)
            pairs = sorted(zip(row.indices.tolist(), row.data.tolist()))
            out.append([[int(i), float(v)] for i, v in pairs])
        return out

    return {"ngram_max": ngram_max, "min_df": min_df, "train": train, "test": test,
            "terms": terms, "idf": [float(x) for x in vec.idf_],
            "train_rows": rows(train), "test_rows": rows(test)}


def main():
    out = sys.argv[1] if len(sys.argv) > 1 else "tests/data/tfidf_reference.json"
    rng = np.random.default_rng(20181106)
    cases = []
    for ngram_max, min_df in [(1, 1), (1, 2), (2, 2), (2, 1), (2, 3)]:
        cases.append(case(docs(rng, 40), docs(rng, 10) + [["unseen", "token"]], ngram_max, min_df))

    train, test = docs(rng, 60), docs(rng, 15)
    labels = [int(rng.random() < 0.7) for _ in train]
    nb_case = case(train, test, 1, 1)
    vec = TfidfVectorizer(tokenizer=str.split, token_pattern=None, lowercase=False, min_df=1)
    x = vec.fit_transform([" ".join(d) for d in train])
    xt = vec.transform([" ".join(d) for d in test])
    mnb = []
    for alpha, fit_prior in [(1.0, True), (0.5, True), (1.0, False)]:
        clf = MultinomialNB(alpha=alpha, fit_prior=fit_prior).fit(x, labels)
        proba = clf.predict_proba(xt)[:, list(clf.classes_).index(1)]
        mnb.append({"alpha": alpha, "reweight_priors": not fit_prior,
                    "p_political": [float(p) for p in proba]})
    nb_case["labels"] = labels
    nb_case["mnb"] = mnb

    with open(out, "w", encoding="utf-8") as f:
        json.dump({"tfidf": cases, "naive_bayes": nb_case}, f, indent=1, ensure_ascii=False)
    print(f"wrote {out}")


if __name__ == "__main__":
    main()
