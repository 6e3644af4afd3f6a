# src/monitoring/metrics.py
from prometheus_client import Counter, Gauge, Histogram, generate_latest, write_to_textfile
from prometheus_client.registry import CollectorRegistry


class MetricsCollector:
    """Metrics collector for verification runs"""

    def __init__(self):
        self.registry = CollectorRegistry()

        self.checks = Counter(
            'nahmlab_checks_total',
            'Checks executed',
            ['suite', 'status'],
            registry=self.registry
        )

        self.check_duration = Histogram(
            'nahmlab_check_duration_seconds',
            'Check wall time',
            ['suite'],
            buckets=[0.01, 0.05, 0.1, 0.5, 1, 5, 10, 30, 120],
            registry=self.registry
        )

        self.series_terms = Histogram(
            'nahmlab_series_terms',
            'Number of stored terms in expanded series',
            buckets=[10, 100, 1000, 10000, 100000],
            registry=self.registry
        )

        self.pass_ratio = Gauge(
            'nahmlab_suite_pass_ratio',
            'Fraction of passing checks in the last run of a suite',
            ['suite'],
            registry=self.registry
        )

    def record_check(self, suite: str, status: str, seconds: float):
        self.checks.labels(suite=suite, status=status).inc()
        self.check_duration.labels(suite=suite).observe(seconds)

    def record_series(self, terms: int):
        self.series_terms.observe(terms)

    def update_pass_ratio(self, suite: str, passed: int, total: int):
        self.pass_ratio.labels(suite=suite).set(passed / total if total else 1.0)

    def get_metrics(self) -> bytes:
        """Get metrics in Prometheus format"""
        return generate_latest(self.registry)

    def write(self, path: str):
        write_to_textfile(path, self.registry)


# Global metrics collector
metrics = MetricsCollector()
