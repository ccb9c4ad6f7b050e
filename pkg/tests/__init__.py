"""specpred test suite."""
