"""Regenerate the bundled tree corpus under src/respcalc/corpus.

The two hand-commented example files are left alone; every other example
tree and one voting tree per method and group size (N = 3) are rewritten.
"""

from fractions import Fraction
from pathlib import Path

from respcalc.scenarios import MethodId, ParadigmId, VotingParams, build_paradigmatic, build_voting_tree
from respcalc.tree_io import serialize

ROOT = Path(__file__).resolve().parent.parent / "src" / "respcalc" / "corpus"
HAND_WRITTEN = {ParadigmId.LOAD_AND_SHOOT, ParadigmId.ROCK_THROWING}
PARAMS = {
    ParadigmId.HESITATION_I: {"p": Fraction(1, 2)},
    ParadigmId.AMBIGUITY_AVERSION: {"p": Fraction(1, 2)},
}


def main() -> None:
    for pid in ParadigmId:
        if pid in HAND_WRITTEN:
            continue
        doc = build_paradigmatic(pid, **PARAMS.get(pid, {}))
        (ROOT / f"{pid.value}.tree").write_text(serialize(doc), encoding="utf-8")
    doc = build_paradigmatic(ParadigmId.CHOOSE_PROBABILITIES, Fraction(1, 4), Fraction(3, 4))
    (ROOT / "choose_probabilities_quarter.tree").write_text(serialize(doc), encoding="utf-8")
    voting = ROOT / "voting"
    voting.mkdir(exist_ok=True)
    for method in MethodId:
        for m in (1, 2, 3):
            doc = build_voting_tree(method, VotingParams(3, m))
            (voting / f"{method.value}_N3_m{m}.tree").write_text(serialize(doc), encoding="utf-8")
    print(f"wrote corpus under {ROOT}")


if __name__ == "__main__":
    main()
