"""Tests for contribution size metrics and commit measurement."""

import itertools
import json
import random

import pytest

from crim import (
    BUILTIN_PROFILES,
    C_LIKE,
    MARKUP,
    RUST,
    SCRIPTING,
    CommitRecord,
    ComplexityUnavailable,
    ContractViolation,
    FallbackReason,
    FileChange,
    MetricKind,
    builtin_registry,
    cc_delta,
    count_function_entries,
    cyclomatic_complexity,
    levenshtein_words,
    line_diff_delta,
    measure_commit,
    measure_history,
    tokenize_words,
)

from conftest import FIXTURES_DIR


def oracle_edit_distance(a: tuple[str, ...], b: tuple[str, ...]) -> int:
    """Edit distance from the full Wagner-Fischer table, independent of the library under test."""
    table = [[0] * (len(b) + 1) for _ in range(len(a) + 1)]
    for i in range(len(a) + 1):
        table[i][0] = i
    for j in range(len(b) + 1):
        table[0][j] = j
    for i in range(1, len(a) + 1):
        for j in range(1, len(b) + 1):
            table[i][j] = min(
                table[i - 1][j] + 1,
                table[i][j - 1] + 1,
                table[i - 1][j - 1] + (a[i - 1] != b[j - 1]),
            )
    return table[len(a)][len(b)]


def _complexity_cases() -> list[object]:
    profiles = {profile.language_name: profile for profile in BUILTIN_PROFILES}
    cases = []
    for fixture in sorted((FIXTURES_DIR / "complexity").glob("*.json")):
        document = json.loads(fixture.read_text(encoding="utf-8"))
        profile = profiles[document["profile"]]
        for case in document["cases"]:
            case_id = f"{fixture.stem}-{case['note']}"
            cases.append(pytest.param(profile, case["source"], case["complexity"], id=case_id))
    return cases


def _commit(*files: FileChange, is_merge: bool = False) -> CommitRecord:
    return CommitRecord("c1", "A", "a@x", 100, is_merge=is_merge, files=files)


@pytest.mark.epic("Metrics")
@pytest.mark.story("Word distance")
class TestWordDistance:
    """Tokenization and word-level edit distance."""

    @pytest.mark.title("Tokenization")
    @pytest.mark.parametrize(
        ("text", "tokens"),
        [("", []), ("a  b", ["a", "b"]), ("a\nb\tc", ["a", "b", "c"]), ("x,y z.", ["x,y", "z."])],
    )
    def test_tokenize(self, text: str, tokens: list[str]) -> None:
        """Tokens are maximal runs of non-whitespace."""
        assert tokenize_words(text) == tokens

    @pytest.mark.title("Worked examples")
    @pytest.mark.parametrize(
        ("a", "b", "expected"),
        [
            (["x", "y"], ["x", "y"], 0),
            ([], ["a", "b", "c"], 3),
            (["the", "quick", "fox"], ["the", "slow", "brown", "fox"], 2),
        ],
    )
    def test_examples(self, a: list[str], b: list[str], expected: int) -> None:
        """Known distances."""
        assert levenshtein_words(a, b) == expected

    @pytest.mark.title("Exhaustive oracle on short lists")
    def test_exhaustive_oracle(self) -> None:
        """Every pair of lists up to length 5 over three symbols matches the oracle."""
        lists = [combo for length in range(6) for combo in itertools.product("abc", repeat=length)]
        for a in lists:
            for b in lists:
                assert levenshtein_words(a, b) == oracle_edit_distance(a, b), (a, b)

    @pytest.mark.title("Metric axioms")
    def test_metric_axioms(self) -> None:
        """Identity, symmetry, triangle inequality and length bounds on random lists."""
        rng = random.Random(20240601)
        alphabet = ["if", "x", "=", "1", "return", "foo"]

        def sample() -> list[str]:
            return [rng.choice(alphabet) for _ in range(rng.randint(0, 12))]

        for _ in range(1000):
            a, b, c = sample(), sample(), sample()
            ab = levenshtein_words(a, b)
            assert levenshtein_words(a, a) == 0
            assert ab == levenshtein_words(b, a)
            assert levenshtein_words(a, c) <= ab + levenshtein_words(b, c)
            assert abs(len(a) - len(b)) <= ab <= max(len(a), len(b))
            assert ab == oracle_edit_distance(tuple(a), tuple(b))


@pytest.mark.epic("Metrics")
@pytest.mark.story("Line delta")
class TestLineDelta:
    """Line delta over an LCS alignment."""

    @pytest.mark.title("Worked examples")
    @pytest.mark.parametrize(
        ("before", "after", "expected"),
        [
            ("a\nb\n", "a\nb\n", 0),
            ("", "x\n", 1),
            ("a\nb\nc", "a\nX\nc", 2),
            ("a\nb\nc\n", "", 3),
            ("a\nb\n", "b\na\n", 2),
        ],
    )
    def test_examples(self, before: str, after: str, expected: int) -> None:
        """A modified line counts as one removal plus one addition."""
        assert line_diff_delta(before, after) == expected

    @pytest.mark.title("Symmetry")
    def test_symmetry(self) -> None:
        """Swapping sides gives the same delta."""
        rng = random.Random(7)
        for _ in range(200):
            x = "\n".join(rng.choice("abcd") for _ in range(rng.randint(0, 8)))
            y = "\n".join(rng.choice("abcd") for _ in range(rng.randint(0, 8)))
            assert line_diff_delta(x, y) == line_diff_delta(y, x)
            assert line_diff_delta(x, x) == 0


@pytest.mark.epic("Metrics")
@pytest.mark.story("Cyclomatic complexity")
class TestComplexity:
    """Decision-token counting."""

    @pytest.mark.title("Hand-counted fixture corpus")
    @pytest.mark.parametrize(("profile", "source", "expected"), _complexity_cases())
    def test_fixture_corpus(self, profile: object, source: str, expected: int) -> None:
        """Each fixture snippet yields its manually counted complexity."""
        assert cyclomatic_complexity(source, profile) == expected

    @pytest.mark.title("Fixture corpus size")
    def test_fixture_corpus_size(self) -> None:
        """Every complexity-capable built-in profile has at least twenty snippets."""
        counts: dict[str, int] = {}
        for fixture in (FIXTURES_DIR / "complexity").glob("*.json"):
            document = json.loads(fixture.read_text(encoding="utf-8"))
            counts[document["profile"]] = len(document["cases"])
        capable = {p.language_name for p in BUILTIN_PROFILES if p.supports_complexity}
        assert set(counts) == capable
        assert all(count >= 20 for count in counts.values())

    @pytest.mark.title("Worked examples")
    def test_examples(self) -> None:
        """Else alone is not a decision; comments are ignored; words need boundaries."""
        assert cyclomatic_complexity("if (a && b) { } else if (c) { }", C_LIKE) == 4
        assert cyclomatic_complexity("// if disabled\nreturn;", C_LIKE) == 1
        assert cyclomatic_complexity("verify(x);", C_LIKE) == 1

    @pytest.mark.title("Unpaired quotes")
    def test_unpaired_quotes(self) -> None:
        """Lifetimes and stray apostrophes hide nothing past their line; double-quoted strings may span lines."""
        source = "fn f<'a>(x: &'a str, y: &'a str) -> bool { if x == y { true } else { false } }"
        assert builtin_registry().for_path("src/lib.rs") == RUST
        assert cyclomatic_complexity(source, RUST) == 2
        assert cyclomatic_complexity("c = 'x;\nif (a) { }\nwhile (b) { }", C_LIKE) == 3
        assert cyclomatic_complexity("s = \"one if\ntwo while\"\nif a:\n    pass", SCRIPTING) == 2

    @pytest.mark.title("Unsupported profile")
    def test_unsupported(self) -> None:
        """Markup has no decision tokens."""
        with pytest.raises(ComplexityUnavailable):
            cyclomatic_complexity("<p>if</p>", MARKUP)

    @pytest.mark.title("Complexity delta")
    def test_cc_delta(self) -> None:
        """Absolute change, with an absent side counting as zero."""
        assert cc_delta("if(a){}", "if(a){} if(b){}", C_LIKE) == 1
        assert cc_delta("if(a){} while(b){}", "for(;;){} if(c){}", C_LIKE) == 0
        assert cc_delta(None, "if(a && b || c){ x ? y : z; }", C_LIKE) == 5
        assert cc_delta("if(a){}", None, C_LIKE) == 2

    @pytest.mark.title("Function entries")
    def test_function_entries(self) -> None:
        """Function tokens are counted outside comments and strings."""
        source = "def a():\n    pass\n\ndef b():\n    return 'def'  # def c\n"
        assert count_function_entries(source, SCRIPTING) == 2
        assert count_function_entries("<p>def</p>", MARKUP) == 0


@pytest.mark.epic("Metrics")
@pytest.mark.story("Commit measurement")
class TestMeasureCommit:
    """Per-file measurement, fallbacks and additivity."""

    @pytest.mark.title("Markup falls back to word distance")
    def test_markup_fallback(self) -> None:
        """Complexity on a markup file is measured as word distance."""
        measure = measure_commit(
            _commit(FileChange("index.html", "<p>hi</p>", "<p>bye</p>")),
            MetricKind.CYCLOMATIC_DELTA,
            builtin_registry(),
        )
        (item,) = measure.per_file
        assert item.effective_metric is MetricKind.LEVENSHTEIN_WORDS
        assert item.file_delta == 1
        assert item.fallback is FallbackReason.NO_COMPLEXITY_PROFILE
        assert measure.fallback_applied
        assert measure.effective_metric is MetricKind.LEVENSHTEIN_WORDS

    @pytest.mark.title("Unknown extensions fall back too")
    def test_unknown_extension_fallback(self) -> None:
        """Files without a known extension never use complexity."""
        measure = measure_commit(
            _commit(FileChange("Makefile", None, "all: build test\n")),
            MetricKind.CYCLOMATIC_DELTA,
            builtin_registry(),
        )
        assert measure.per_file[0].effective_metric is MetricKind.LEVENSHTEIN_WORDS
        assert measure.delta_l == 3.0

    @pytest.mark.title("Empty commit")
    def test_empty_commit(self) -> None:
        """No files means zero contribution."""
        measure = measure_commit(_commit(), MetricKind.LOC_DELTA, builtin_registry())
        assert measure.delta_l == 0.0
        assert not measure.fallback_applied

    @pytest.mark.title("Additivity over files")
    def test_additivity(self) -> None:
        """delta_l sums per-file complexity deltas regardless of order."""
        files = (
            FileChange("a.c", "return 0;", "if (a) { } if (b) { }"),
            FileChange("b.c", None, "while (x && y || z) { }"),
        )
        registry = builtin_registry()
        forward = measure_commit(_commit(*files), MetricKind.CYCLOMATIC_DELTA, registry)
        backward = measure_commit(_commit(*reversed(files)), MetricKind.CYCLOMATIC_DELTA, registry)
        assert [item.file_delta for item in forward.per_file] == [2, 4]
        assert forward.delta_l == 6.0
        assert backward.delta_l == forward.delta_l
        assert forward.effective_metric is MetricKind.CYCLOMATIC_DELTA
        assert not forward.fallback_applied

    @pytest.mark.title("Mixed files keep provenance")
    def test_mixed_fallback(self) -> None:
        """A commit mixing code and markup reports the fallback but keeps the requested metric."""
        measure = measure_commit(
            _commit(FileChange("a.py", None, "if x:\n    pass\n"), FileChange("notes.md", "a b", "a c d")),
            MetricKind.CYCLOMATIC_DELTA,
            builtin_registry(),
        )
        assert [item.effective_metric for item in measure.per_file] == [
            MetricKind.CYCLOMATIC_DELTA,
            MetricKind.LEVENSHTEIN_WORDS,
        ]
        assert measure.delta_l == 4.0
        assert measure.fallback_applied
        assert measure.effective_metric is MetricKind.CYCLOMATIC_DELTA

    @pytest.mark.title("Binary files contribute nothing")
    def test_binary(self) -> None:
        """Binary changes are measured as zero."""
        measure = measure_commit(
            _commit(FileChange("logo.png", None, None, is_binary=True), FileChange("a.txt", None, "x\ny\n")),
            MetricKind.LOC_DELTA,
            builtin_registry(),
        )
        assert [item.file_delta for item in measure.per_file] == [0, 2]

    @pytest.mark.title("Oversize files use line delta")
    def test_oversize(self) -> None:
        """Content above the size limit is measured by lines and flagged separately."""
        measure = measure_commit(
            _commit(FileChange("big.txt", None, "one two three\nfour\n")),
            MetricKind.LEVENSHTEIN_WORDS,
            builtin_registry(),
            max_file_chars=5,
        )
        (item,) = measure.per_file
        assert item.effective_metric is MetricKind.LOC_DELTA
        assert item.file_delta == 2
        assert item.fallback is FallbackReason.OVERSIZE
        assert measure.oversize_applied
        assert not measure.fallback_applied

    @pytest.mark.title("Merge commits are rejected")
    def test_merge(self) -> None:
        """Measuring a merge is a contract violation."""
        with pytest.raises(ContractViolation):
            measure_commit(_commit(is_merge=True), MetricKind.LOC_DELTA, builtin_registry())

    @pytest.mark.title("Parallel measurement is deterministic")
    def test_history_workers(self) -> None:
        """Worker count never changes the measures."""
        records = [
            CommitRecord(f"c{i}", "A", "a@x", i, files=(FileChange(f"f{i}.py", None, "if a:\n    b\n" * i),))
            for i in range(1, 9)
        ]
        registry = builtin_registry()
        sequential = measure_history(records, MetricKind.CYCLOMATIC_DELTA, registry, workers=1)
        parallel = measure_history(records, MetricKind.CYCLOMATIC_DELTA, registry, workers=2)
        assert sequential == parallel
        assert [m.delta_l for m in sequential] == [float(i + 1) for i in range(1, 9)]


@pytest.mark.epic("Metrics")
@pytest.mark.story("Oracle")
@pytest.mark.title("Oracle sanity")
def test_oracle_known_values() -> None:
    """The independent oracle agrees with hand-computed distances."""
    assert oracle_edit_distance((), ()) == 0
    assert oracle_edit_distance(("a", "b"), ("b", "a")) == 2
    assert oracle_edit_distance(("k", "i", "t"), ("s", "i", "t", "s")) == 2
