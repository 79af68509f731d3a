"""Validation reports: every failed law is recorded with a witness."""

from __future__ import annotations


class Report:
    """Outcome of a validation run.

    failures is a list of dicts {"law": ..., "witness": ...}; a report with
    no failures passes.  Witnesses are basis labels or tuples of labels and
    are sufficient to reproduce the failure.
    """

    def __init__(self, subject=""):
        self.subject = subject
        self.failures = []

    def add(self, law, witness, detail=None):
        entry = {"law": law, "witness": witness}
        if detail is not None:
            entry["detail"] = detail
        self.failures.append(entry)

    @property
    def ok(self):
        return not self.failures

    def assert_ok(self):
        if not self.ok:
            raise AssertionError(f"{self.subject or 'validation'} failed: {self.failures[:3]}")
        return self

    def merge(self, other, prefix=""):
        for f in other.failures:
            g = dict(f)
            if prefix:
                g["law"] = f"{prefix}:{f['law']}"
            self.failures.append(g)
        return self

    def lines(self):
        if self.ok:
            return [f"{self.subject or 'validation'}: ok"]
        out = [f"{self.subject or 'validation'}: {len(self.failures)} failure(s)"]
        for f in self.failures:
            detail = f" [{f['detail']}]" if "detail" in f else ""
            out.append(f"  {f['law']} fails at {f['witness']!r}{detail}")
        return out

    def as_dict(self):
        return {"subject": self.subject, "ok": self.ok,
                "failures": [dict(f) for f in self.failures]}

    def __repr__(self):
        return f"Report({self.subject!r}, ok={self.ok})"
