"""Example usage of the factorization engine as a library."""

from src.certificates import check_report
from src.config import Settings
from src.service import FactorizationService
from src.utils import ProblemCorpus


def describe_problem(service: FactorizationService, corpus: ProblemCorpus, name: str):
    """Factor one corpus morphism and print what the report says."""
    print(f"\n{'='*60}")
    print(f"Factorizing: {name}")
    print(f"{'='*60}\n")

    report = service.run_factorize(corpus.get_problem(name))

    print(f"Kodaira split: m = {report.kodaira.m}")
    for entry in report.kodaira.exceptional:
        if entry.coefficient:
            print(f"  E coefficient {entry.coefficient} on ray {entry.ray}")
    print(f"Master polytope: {len(report.master.vertices)} vertices, q = {report.master.q}\n")

    for wall in report.walls:
        print(f"Wall at s = {wall.s_value}")
        for component in wall.fixed_components:
            print(f"  Fixed component {component.vertices}: down {component.down_weights}, up {component.up_weights}")
        for step in wall.steps:
            print(f"  {step.kind} at ray {step.ray} with weights {step.weights}")
    print()

    for warning in report.warnings:
        print(f"  Warning ({warning.kind}): {warning.message}")

    result = check_report(report)
    print(f"Certificate check passed: {len(result.claims)} claims")


def main():
    """Run example usage."""
    service = FactorizationService(Settings())
    corpus = ProblemCorpus.create_default_corpus()

    for name in ["blp2", "weighted", "chain", "two_point"]:
        describe_problem(service, corpus, name)

    print(f"\n{'='*60}")
    print("Stage Metrics")
    print(f"{'='*60}\n")

    summary = service.metrics.get_metrics_summary()
    print(f"Total runs: {summary['total_runs']}")
    for stage, timing in summary["stages"].items():
        print(f"{stage:>14}: p50 {timing['p50_ms']} ms, p99 {timing['p99_ms']} ms")
    print(f"Counters: {summary['counters']}")
    print()


if __name__ == "__main__":
    main()
