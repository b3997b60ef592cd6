"""One test per acceptance criterion, each printing a pass/fail line."""

import json

import pytest

from tensorhoch import suite

from conftest import ACCEPTANCE


def test_all_eleven_registered():
    assert [fn.cid for fn in suite.CHECKS] == list(range(1, 12))


@pytest.mark.parametrize("fn", suite.CHECKS, ids=lambda fn: f"criterion_{fn.cid:02d}")
def test_criterion(fn, signs):
    r = suite.run_check(fn)
    ACCEPTANCE.append(r)
    print(f"criterion {r['id']}: {'PASS' if r['pass'] else 'FAIL'} {r['title']}")
    assert r["pass"], json.dumps(r["detail"], default=str, sort_keys=True)
