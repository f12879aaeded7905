#!/usr/bin/env python3
"""
ordlab component smoke check.
Loads the configuration, the shipped catalog and samples, and exercises each
core component once. Run it after installing requirements:

    python test_all_components.py
"""

import os
import sys
from datetime import datetime
from typing import Any

sys.path.insert(0, os.path.dirname(os.path.abspath(__file__)))

try:
    from dotenv import load_dotenv
    from loguru import logger
    import numpy
    import joblib
    import pydantic
except ImportError as e:
    print(f"❌ IMPORT ERROR: {e}")
    print("Please install missing dependencies with: pip install -r requirements.txt")
    sys.exit(1)

load_dotenv()

SAMPLES = os.path.join(os.path.dirname(os.path.abspath(__file__)), "data", "samples")


def _sample(name: str) -> str:
    with open(os.path.join(SAMPLES, name), encoding="utf-8") as handle:
        return handle.read()


class ComponentTester:
    def __init__(self):
        self.results = {}

    def log_test(self, component: str, status: str, message: str, details: Any = None):
        """Log test results"""
        self.results[component] = {
            "status": status,
            "message": message,
            "details": details,
            "timestamp": datetime.now().isoformat(),
        }
        status_icon = "✅" if status == "PASS" else "❌"
        print(f"{status_icon} {component}: {message}")
        if details and status == "FAIL":
            print(f"   Details: {details}")

    def check(self, component: str, func) -> bool:
        try:
            message = func()
        except Exception as e:
            self.log_test(component, "FAIL", f"{type(e).__name__}: {e}", str(e))
            return False
        self.log_test(component, "PASS", message)
        return True

    def test_configuration(self) -> bool:
        print("\n🔧 Testing Configuration...")
        from app.config import config

        def run():
            config.validate()
            return f"bound {config.derivative_bound}, {config.epsilon_atoms} ε atoms, {config.suite_workers} workers"

        return self.check("Configuration", run)

    def test_ordinals(self) -> bool:
        print("\n🔢 Testing Ordinal Arithmetic...")
        from app.core.ordinal import natural_sum, to_str
        from app.parsers.expressions import parse_ordinal

        def run():
            a, b = parse_ordinal("w^2 + 1"), parse_ordinal("w^3")
            assert to_str(a + b) == "w^3"
            assert to_str(natural_sum(a, b)) == "w^3 + w^2 + 1"
            return "sum, natural sum and printing agree"

        return self.check("Ordinals", run)

    def test_sets_and_regions(self) -> bool:
        print("\n📐 Testing Sets and Regions...")
        from app.parsers.documents import parse_region_file
        from app.parsers.expressions import parse_set

        def run():
            assert str(parse_set("[0,w^2]").cb_rank()) == "2"
            square = parse_region_file(_sample("square.region"))
            assert str(square.cb_rank_finite()) == "4"
            return "closed-form and iterated ranks agree on samples"

        return self.check("Sets and Regions", run)

    def test_terms(self) -> bool:
        print("\n🧮 Testing Rank Calculus...")
        from app.core.spaceterm import oracle_rank, rank
        from app.parsers.expressions import parse_term

        def run():
            term = parse_term("vecsum(w^3, ord(w^2))")
            assert rank(term) == oracle_rank(term)
            return f"rank {rank(term)} confirmed by the oracle"

        return self.check("Space Terms", run)

    def test_duality(self) -> bool:
        print("\n🔁 Testing Duality...")
        from app.core.duality import final_segments, is_isomorphic, prime_filters
        from app.parsers.documents import parse_poset_file

        def run():
            p = parse_poset_file(_sample("diamond.poset"))
            assert is_isomorphic(prime_filters(final_segments(p)), p)
            return f"round trip through {final_segments(p).size} final segments"

        return self.check("Duality", run)

    def test_classifier(self) -> bool:
        print("\n🏷️ Testing Classifier...")
        from app.suites.catalog import check_entry, load_catalog

        def run():
            catalog = load_catalog()
            failures = [e.name for e in catalog.entries if check_entry(e) is not None]
            assert not failures, failures
            return f"{len(catalog.entries)} catalog entries labeled as expected"

        return self.check("Classifier", run)

    def print_final_report(self):
        """Print final test report"""
        print("\n" + "=" * 60)
        print("🧪 ORDLAB COMPONENT REPORT")
        print("=" * 60)

        total_tests = len(self.results)
        passed_tests = sum(1 for r in self.results.values() if r["status"] == "PASS")
        failed_tests = total_tests - passed_tests

        for component, result in self.results.items():
            status_icon = "✅" if result["status"] == "PASS" else "❌"
            print(f"{status_icon} {component}: {result['status']}")
            if result["status"] == "FAIL":
                print(f"   Error: {result['message']}")

        print(f"\nSUMMARY: {passed_tests}/{total_tests} tests passed")

        if failed_tests == 0:
            print("🎉 ALL COMPONENTS PASSED!")
        else:
            print(f"⚠️ {failed_tests} component(s) failed.")

        return failed_tests == 0


def main() -> bool:
    print("🚀 Starting ordlab component checks...")
    print("=" * 60)
    logger.remove()

    tester = ComponentTester()
    tester.test_configuration()
    tester.test_ordinals()
    tester.test_sets_and_regions()
    tester.test_terms()
    tester.test_duality()
    tester.test_classifier()
    return tester.print_final_report()


if __name__ == "__main__":
    success = main()
    sys.exit(0 if success else 1)
