"""
Tests for validation reports.
"""

from gaiakit.schemas import ValidationReport, Violation, ViolationKind


class TestValidationReport:
    """Tests for ValidationReport."""

    def test_empty_report_is_valid(self):
        assert ValidationReport().valid

    def test_violation_invalidates(self):
        report = ValidationReport()
        report.add(ViolationKind.ASSOCIATIVITY, "h.(g.f) != (h.g).f")
        assert not report.valid
        assert report.kinds() == [ViolationKind.ASSOCIATIVITY]
        assert report.violations[0] == Violation(ViolationKind.ASSOCIATIVITY, "h.(g.f) != (h.g).f")

    def test_structural_problem_invalidates(self):
        report = ValidationReport(structural=["unknown morphism 'f'"])
        assert not report.valid
        assert report.kinds() == []

    def test_kinds_serialize_as_strings(self):
        assert ViolationKind.METRIC == "metric"
