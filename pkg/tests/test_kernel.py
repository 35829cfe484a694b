"""Signature-level operations checked against table-level facts.

The kernel decides mono/onto/jointly-monic by quantifying over test objects
and hom-sets; the table shortcuts (injective/surjective) live in the finset
module.  Their agreement is asserted here instance by instance, which is
itself one of the statements the package exists to check.
"""

from __future__ import annotations

import pytest

from cetcs.errors import CompositionError
from cetcs import kernel
from cetcs.finset import (
    FINSET,
    FinMor,
    all_maps,
    carrier,
    carrier_of_size,
    identity,
    initial,
    terminal,
)

A = carrier("a", "b")
B = carrier("u", "v", "w")


def test_compose_via_category_handle():
    f = FinMor(A, B, ("u", "v"))
    assert kernel.compose(FINSET, identity(B), f) == f
    with pytest.raises(CompositionError):
        kernel.compose(FINSET, f, f)


def test_identity_via_category_handle():
    assert kernel.identity(FINSET, B) == identity(B)


def test_elements_count_equals_carrier_size():
    for n in range(4):
        a = carrier_of_size(n)
        assert len(kernel.elements(FINSET, a)) == n
    assert kernel.elements(FINSET, initial()) == []


def test_is_element():
    e = kernel.elements(FINSET, B)[1]
    assert kernel.is_element(FINSET, e)
    assert not kernel.is_element(FINSET, identity(B))


def test_mono_agrees_with_injective_everywhere():
    for na in range(3):
        for nb in range(3):
            a, b = carrier_of_size(na, "a"), carrier_of_size(nb, "b")
            for f in all_maps(a, b):
                assert kernel.is_mono(FINSET, f, bound=2) == f.is_injective()


def test_onto_agrees_with_surjective_everywhere():
    for na in range(3):
        for nb in range(3):
            a, b = carrier_of_size(na, "a"), carrier_of_size(nb, "b")
            for f in all_maps(a, b):
                assert kernel.is_onto(FINSET, f) == f.is_surjective()


def test_mono_left_cancellation_witnessed():
    f = FinMor(A, terminal(), ("★", "★"))
    assert not kernel.is_mono(FINSET, f, bound=2)
    incl = FinMor(A, B, ("u", "v"))
    assert kernel.is_mono(FINSET, incl, bound=2)


def test_jointly_monic_pair():
    p1 = FinMor(A, terminal(), ("★", "★"))
    p2 = FinMor(A, B, ("u", "u"))
    assert not kernel.jointly_monic(FINSET, (p1, p2), bound=2)
    q2 = FinMor(A, B, ("u", "v"))
    assert kernel.jointly_monic(FINSET, (p1, q2), bound=2)


def test_jointly_monic_empty_family():
    assert kernel.jointly_monic(FINSET, (), bound=2, dom=terminal())
    assert not kernel.jointly_monic(FINSET, (), bound=2, dom=A)


def test_member_is_row_membership():
    x = kernel.elements(FINSET, B)
    m = FinMor(A, B, ("u", "w"))
    assert kernel.member(FINSET, (x[0],), (m,))
    assert not kernel.member(FINSET, (x[1],), (m,))
