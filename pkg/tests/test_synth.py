"""Tests for synthetic histories and estimator evaluation against ground truth."""

import io

import pytest

from crim import (
    AnalysisResult,
    ContractViolation,
    EffortEstimate,
    EffortSource,
    ErrorSummary,
    GapProfile,
    GroundTruth,
    MetricKind,
    ObservationClass,
    ParameterError,
    RateBounds,
    RunConfig,
    SynthParams,
    TruthEntry,
    analyze_records,
    builtin_registry,
    evaluate,
    fit_mbcr,
    generate,
    measure_commit,
    write_truth_csv,
)


def run_pipeline(params: SynthParams, trim: float = 0.0) -> tuple[AnalysisResult, GroundTruth]:
    """Generate a history and analyze it by word distance."""
    records, truth = generate(params)
    config = RunConfig(
        jsonl_path="synthetic.jsonl",
        metric=MetricKind.LEVENSHTEIN_WORDS,
        bounds=RateBounds(trim_fraction=trim),
        min_support=0,
        workers=1,
    )
    return analyze_records(records, config), truth


@pytest.mark.epic("Synthetic validation")
@pytest.mark.story("Generator")
class TestGenerate:
    """Shape and determinism of generated histories."""

    @pytest.mark.title("Deterministic for a seed")
    def test_deterministic(self) -> None:
        """Equal parameters produce equal histories."""
        params = SynthParams(seed=7, n_commits=50, n_authors=3, noise_sigma=0.2)
        assert generate(params) == generate(params)
        assert generate(params)[0] != generate(SynthParams(seed=8, n_commits=50, n_authors=3, noise_sigma=0.2))[0]

    @pytest.mark.title("Realized size matches truth")
    def test_realized_size(self) -> None:
        """Each commit's word distance equals its intended contribution size."""
        records, truth = generate(SynthParams(seed=3, n_commits=20, size_scale=2))
        registry = builtin_registry()
        for record, entry in zip(records, truth.entries, strict=True):
            assert record.commit_id == entry.commit_id
            assert measure_commit(record, MetricKind.LEVENSHTEIN_WORDS, registry).delta_l == entry.delta_l
            assert entry.delta_l % 2 == 0

    @pytest.mark.title("Ordered and per-author")
    def test_ordering(self) -> None:
        """Records are ordered by timestamp and spread over the requested authors."""
        records, _ = generate(SynthParams(seed=5, n_commits=100, n_authors=4))
        keys = [(r.timestamp, r.commit_id) for r in records]
        assert keys == sorted(keys)
        assert len({r.author_email for r in records}) == 4

    @pytest.mark.title("Idle only before unobserved commits")
    def test_idle_profile(self) -> None:
        """Without idle time every non-first commit is observed."""
        result, _ = run_pipeline(SynthParams(seed=2, n_commits=40, gap_profile=GapProfile(idle_probability=0.0)))
        classes = [s.observation for s in result.samples]
        assert classes[0] is ObservationClass.UNOBSERVED
        assert set(classes[1:]) == {ObservationClass.OBSERVED}

    @pytest.mark.title("Invalid parameters")
    @pytest.mark.parametrize(
        "params",
        [
            SynthParams(seed=1, n_commits=0),
            SynthParams(seed=1, n_commits=5, n_authors=0),
            SynthParams(seed=1, n_commits=5, true_rho=0),
            SynthParams(seed=1, n_commits=5, noise_sigma=-0.1),
            SynthParams(seed=1, n_commits=5, size_scale=0),
            SynthParams(seed=1, n_commits=5, gap_profile=GapProfile(idle_probability=1.5)),
            SynthParams(seed=1, n_commits=5, true_rho=0.01, effort_max_hours=1.0, effort_min_hours=0.5),
        ],
    )
    def test_invalid(self, params: SynthParams) -> None:
        """Out-of-domain parameters are rejected before generating."""
        with pytest.raises(ParameterError):
            generate(params)

    @pytest.mark.title("Truth CSV")
    def test_truth_csv(self) -> None:
        """Ground truth is written with a fixed header, one line per commit."""
        _, truth = generate(SynthParams(seed=1, n_commits=3))
        stream = io.StringIO()
        write_truth_csv(truth, stream)
        lines = stream.getvalue().split("\n")
        assert lines[0] == "commit_id,true_effort_hours,true_rate"
        assert len(lines) == 5
        assert lines[-1] == ""
        assert lines[1].split(",")[0] == truth.entries[0].commit_id
        assert float(lines[1].split(",")[2]) == truth.entries[0].true_rate


@pytest.mark.epic("Synthetic validation")
@pytest.mark.story("Recovery")
class TestRecovery:
    """The estimator recovers known effort from generated histories."""

    @pytest.mark.title("Noiseless recovery")
    def test_noiseless(self) -> None:
        """With a constant rate the fit is exact and imputed effort matches truth."""
        result, truth = run_pipeline(SynthParams(seed=1, n_commits=200, true_rho=60.0, noise_sigma=0.0))
        assert fit_mbcr(result.samples, 0.0) == pytest.approx(60.0, rel=1e-9)
        assert result.model.global_rho == pytest.approx(60.0, rel=1e-9)

        imputed = 0
        for entry, estimate in zip(truth.entries, result.estimates, strict=True):
            assert estimate.commit_id == entry.commit_id
            if estimate.source is EffortSource.IMPUTED:
                imputed += 1
                assert estimate.delta_t_hours == pytest.approx(entry.true_effort_hours, rel=1e-6)
            else:
                assert estimate.delta_t_hours == pytest.approx(entry.true_effort_hours, rel=1e-12)
        assert imputed > 1

        report = evaluate(truth, result.estimates)
        assert report.imputed.mdape_percent == pytest.approx(0.0, abs=1e-6)
        assert report.overall.total_relative_error == pytest.approx(0.0, abs=1e-6)

    @pytest.mark.title("Noisy robustness")
    def test_noisy(self) -> None:
        """Lognormal rate noise keeps per-commit and total errors bounded."""
        result, truth = run_pipeline(SynthParams(seed=1, n_commits=1000, noise_sigma=0.2), trim=0.05)
        report = evaluate(truth, result.estimates)
        assert report.imputed.count > 0
        assert report.imputed.mdape_percent is not None
        assert report.imputed.mdape_percent <= 25.0
        assert report.overall.total_relative_error is not None
        assert report.overall.total_relative_error <= 0.10

    @pytest.mark.title("Scale consistency")
    @pytest.mark.parametrize("factor", [2, 5])
    def test_scale(self, factor: int) -> None:
        """Scaling every size scales the rate and leaves imputed effort unchanged."""
        base, _ = run_pipeline(SynthParams(seed=9, n_commits=150, n_authors=2, noise_sigma=0.2), trim=0.1)
        scaled, _ = run_pipeline(
            SynthParams(seed=9, n_commits=150, n_authors=2, noise_sigma=0.2, size_scale=factor),
            trim=0.1,
        )
        assert scaled.model.global_rho == pytest.approx(factor * base.model.global_rho, rel=1e-9)
        for plain, scaled_estimate in zip(base.estimates, scaled.estimates, strict=True):
            assert plain.source is scaled_estimate.source
            if plain.source is EffortSource.IMPUTED:
                assert scaled_estimate.delta_t_hours == pytest.approx(plain.delta_t_hours, rel=1e-9)

    @pytest.mark.title("Cap soundness")
    def test_cap_soundness(self) -> None:
        """No estimate with an interval exceeds that interval."""
        for seed in range(5):
            result, _ = run_pipeline(SynthParams(seed=seed, n_commits=120, n_authors=3, noise_sigma=0.5), trim=0.1)
            for ctd, estimate in zip(result.ctds, result.estimates, strict=True):
                if ctd.ctd_seconds is not None:
                    assert estimate.delta_t_hours <= ctd.ctd_seconds / 3600

    @pytest.mark.title("Deterministic evaluation")
    def test_evaluate_deterministic(self) -> None:
        """Evaluating the same run twice gives the same report."""
        result, truth = run_pipeline(SynthParams(seed=4, n_commits=80, noise_sigma=0.3))
        assert evaluate(truth, result.estimates) == evaluate(truth, result.estimates)

    @pytest.mark.title("Misaligned estimates")
    def test_evaluate_misaligned(self) -> None:
        """Estimates must line up with the truth."""
        result, truth = run_pipeline(SynthParams(seed=4, n_commits=10))
        with pytest.raises(ContractViolation):
            evaluate(truth, result.estimates[1:])
        with pytest.raises(ContractViolation):
            evaluate(truth, tuple(reversed(result.estimates)))


TRUTH = GroundTruth(
    entries=(
        TruthEntry("c1", "a", true_effort_hours=1.5, true_rate=60.0, delta_l=90, idle_seconds=0),
        TruthEntry("c2", "a", true_effort_hours=2.0, true_rate=60.0, delta_l=120, idle_seconds=3600),
        TruthEntry("c3", "b", true_effort_hours=0.5, true_rate=60.0, delta_l=30, idle_seconds=7200),
    ),
)


def estimates_at(measured_factor: float, imputed_factor: float) -> list[EffortEstimate]:
    """Estimates for ``TRUTH``: c1 measured, c2 and c3 imputed, each scaled from the true effort."""
    measured = TRUTH.entries[0]
    estimates = [
        EffortEstimate(
            measured.commit_id,
            measured.author_id,
            delta_t_hours=measured.true_effort_hours * measured_factor,
            source=EffortSource.MEASURED,
            capped=False,
            rho_used=None,
            delta_l=measured.delta_l,
        ),
    ]
    for entry in TRUTH.entries[1:]:
        estimates.append(
            EffortEstimate(
                entry.commit_id,
                entry.author_id,
                delta_t_hours=entry.true_effort_hours * imputed_factor,
                source=EffortSource.IMPUTED,
                capped=False,
                rho_used=60.0,
                delta_l=entry.delta_l,
            ),
        )
    return estimates


@pytest.mark.epic("Synthetic validation")
@pytest.mark.story("Evaluation")
class TestEvaluate:
    """Error summaries against known ground truth."""

    @pytest.mark.title("Exact estimates")
    def test_exact(self) -> None:
        """Estimates equal to the truth give zero error everywhere."""
        report = evaluate(TRUTH, estimates_at(1.0, 1.0))
        assert report.imputed == ErrorSummary(count=2, mape_percent=0.0, mdape_percent=0.0, total_relative_error=0.0)
        assert report.overall == ErrorSummary(count=3, mape_percent=0.0, mdape_percent=0.0, total_relative_error=0.0)

    @pytest.mark.title("Doubled estimates")
    def test_doubled(self) -> None:
        """Every estimate at twice the truth is 100 percent off and doubles the total."""
        report = evaluate(TRUTH, estimates_at(2.0, 2.0))
        for summary in (report.imputed, report.overall):
            assert summary.mape_percent == 100.0
            assert summary.mdape_percent == 100.0
            assert summary.total_relative_error == 1.0
        assert (report.imputed.count, report.overall.count) == (2, 3)

    @pytest.mark.title("Imputed errors only")
    def test_imputed_doubled(self) -> None:
        """Exact measured effort dilutes the overall error but not the imputed one."""
        report = evaluate(TRUTH, estimates_at(1.0, 2.0))
        assert report.imputed.mape_percent == 100.0
        assert report.overall.mape_percent == pytest.approx(200.0 / 3)
        assert report.overall.mdape_percent == 100.0
        assert report.overall.total_relative_error == pytest.approx(0.625)

    @pytest.mark.title("No imputed commits")
    def test_no_imputed(self) -> None:
        """Without imputed commits the imputed summary is empty."""
        estimates = estimates_at(1.0, 1.0)
        measured_only = GroundTruth(entries=TRUTH.entries[:1])
        report = evaluate(measured_only, estimates[:1])
        assert report.imputed == ErrorSummary(count=0, mape_percent=None, mdape_percent=None, total_relative_error=None)
        assert report.overall.count == 1
