"""Print trace extremes and constant-diagonal counts for every available vertex count.

    python3 scripts/summarize_corpora.py            # n = 2..6 built in, 7..9 if data/ has them
    python3 scripts/summarize_corpora.py --max-n 8 --jobs 4
"""

import argparse
import time
from pathlib import Path

from avgmix.survey import builtin_corpus, extremal_trace, flag_counts, read_corpus, survey_corpus

DATA = Path(__file__).resolve().parent.parent / "data"


def corpus(n):
    if n <= 6:
        return builtin_corpus(n)
    for name in (f"graphs{n}.g6", f"graphs{n}.g6.gz"):
        if (DATA / name).exists():
            return read_corpus(DATA / name)
    return None


def fmt(res):
    r = res.value_rational
    return f"{res.value:.12g}" + (f" ({r})" if r else "") + f" x{len(res.witnesses)}"


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--max-n", type=int, default=9)
    ap.add_argument("--jobs", type=int, default=1)
    args = ap.parse_args()
    print(f"{'n':>2} {'graphs':>7} {'counts A/L/wr':>14}  {'max tr A':<26} {'min tr A':<28} {'min tr L':<26} secs")
    for n in range(2, args.max_n + 1):
        texts = corpus(n)
        if texts is None:
            print(f"{n:>2} (no corpus; see scripts/make_corpus.py)")
            continue
        t0 = time.perf_counter()
        recs = survey_corpus(texts, workers=args.jobs)
        counts = "/".join(map(str, flag_counts(recs).as_tuple()))
        cols = [fmt(extremal_trace(recs, k, d)) for k, d in (("A", "max"), ("A", "min"), ("L", "min"))]
        print(f"{n:>2} {len(recs):>7} {counts:>14}  {cols[0]:<26} {cols[1]:<28} {cols[2]:<26} "
              f"{time.perf_counter() - t0:.1f}")


if __name__ == "__main__":
    main()
