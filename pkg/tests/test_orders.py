import itertools
import random
from math import factorial

import pytest

from implab.orders import (
    CYCLIC_CODES,
    LinearOrder,
    Profile,
    all_linear_orders,
    all_profiles,
    bits_of_order,
    format_bits,
    kendall_tau,
    order_of_bits,
)

ABC = LinearOrder((0, 1, 2))
ACB = LinearOrder((0, 2, 1))
CBA = LinearOrder((2, 1, 0))


def test_all_linear_orders_counts():
    assert len(all_linear_orders(1)) == 1
    assert len(all_linear_orders(3)) == 6
    assert len(all_linear_orders(4)) == 24


def test_m3_bit_codes_are_the_six_acyclic_ones():
    codes = {bits_of_order(o) for o in all_linear_orders(3)}
    assert codes == {(0, 0, 0), (0, 0, 1), (0, 1, 1), (1, 0, 0), (1, 1, 0), (1, 1, 1)}


def test_all_linear_orders_lexicographic_and_unique():
    for m in range(1, 6):
        orders = all_linear_orders(m)
        assert len(orders) == factorial(m)
        assert len(set(orders)) == len(orders)
        assert [o.ranking for o in orders] == sorted(o.ranking for o in orders)


def test_all_linear_orders_domain_errors():
    with pytest.raises(ValueError):
        all_linear_orders(0)
    with pytest.raises(ValueError):
        all_linear_orders(7)


def test_linear_order_rejects_non_permutations():
    with pytest.raises(ValueError):
        LinearOrder((0, 0, 1))
    with pytest.raises(ValueError):
        LinearOrder(())


def test_bits_of_order_examples():
    assert bits_of_order(ABC) == (1, 1, 1)
    assert bits_of_order(ACB) == (1, 1, 0)
    assert bits_of_order(CBA) == (0, 0, 0)


def test_bits_of_order_rejects_other_m():
    with pytest.raises(ValueError):
        bits_of_order(LinearOrder((0, 1)))


def test_order_of_bits_is_inverse_on_valid_codes():
    for o in all_linear_orders(3):
        assert order_of_bits(bits_of_order(o)) == o
    for code in [(0, 0, 0), (0, 0, 1), (0, 1, 1), (1, 0, 0), (1, 1, 0), (1, 1, 1)]:
        assert bits_of_order(order_of_bits(code)) == code


def test_order_of_bits_decodes_001_to_bca():
    # oracle: scan all six permutations for the one matching the three bits
    code = (0, 0, 1)
    matches = [o for o in all_linear_orders(3) if bits_of_order(o) == code]
    assert matches == [LinearOrder((1, 2, 0))]  # b>c>a
    assert order_of_bits(code) == LinearOrder((1, 2, 0))


def test_order_of_bits_rejects_cycles_naming_them():
    with pytest.raises(ValueError, match=r"cyclic bit code 010: b>a, a>c, c>b"):
        order_of_bits((0, 1, 0))
    with pytest.raises(ValueError, match=r"cyclic bit code 101: a>b, c>a, b>c"):
        order_of_bits((1, 0, 1))


def test_format_bits():
    assert format_bits((1, 1, 0)) == "110"


def test_kendall_tau_examples():
    assert kendall_tau(ABC, ABC) == 0
    assert kendall_tau(ABC, ACB) == 1
    assert kendall_tau(ABC, CBA) == 3


def test_kendall_tau_rejects_mismatched_m():
    with pytest.raises(ValueError):
        kendall_tau(ABC, LinearOrder((0, 1)))


def test_kendall_tau_equals_hamming_distance_at_m3():
    orders = all_linear_orders(3)
    for o1, o2 in itertools.product(orders, orders):
        hamming = sum(a != b for a, b in zip(bits_of_order(o1), bits_of_order(o2)))
        assert kendall_tau(o1, o2) == hamming


def test_kendall_tau_metric_properties_at_m3():
    orders = all_linear_orders(3)
    for o1 in orders:
        assert kendall_tau(o1, o1) == 0
        for o2 in orders:
            d = kendall_tau(o1, o2)
            assert d == kendall_tau(o2, o1)
            assert 0 <= d <= 3
            assert (d == 0) == (o1 == o2)
            for o3 in orders:
                assert kendall_tau(o1, o3) <= d + kendall_tau(o2, o3)


def _inversion_count_oracle(o1: LinearOrder, o2: LinearOrder) -> int:
    # independent route: inversions of o2's ranking mapped through o1's positions
    mapped = [o1.ranking.index(x) for x in o2.ranking]
    return sum(
        1
        for i in range(len(mapped))
        for j in range(i + 1, len(mapped))
        if mapped[i] > mapped[j]
    )


def test_kendall_tau_matches_inversion_count_on_random_pairs():
    rng = random.Random(7)
    for m in (4, 5):
        orders = all_linear_orders(m)
        for _ in range(50):
            o1, o2 = rng.choice(orders), rng.choice(orders)
            assert kendall_tau(o1, o2) == _inversion_count_oracle(o1, o2)


def test_all_profiles_counts():
    assert len(all_profiles(2, 3)) == 36
    assert len(all_profiles(1, 3)) == 6
    assert len(all_profiles(3, 3)) == 216


def test_all_profiles_budget_error_states_count():
    with pytest.raises(ValueError, match=str(6**10)):
        all_profiles(10, 3)


def test_all_profiles_canonical_order():
    profiles = all_profiles(2, 3)
    orders = all_linear_orders(3)
    rank = {o: i for i, o in enumerate(orders)}
    keys = [(rank[p.orders[0]], rank[p.orders[1]]) for p in profiles]
    assert keys == sorted(keys)
    assert len(set(profiles)) == 36


def test_no_produced_order_is_cyclic():
    for o in all_linear_orders(3):
        assert bits_of_order(o) not in CYCLIC_CODES


def test_profile_validation():
    with pytest.raises(ValueError):
        Profile(())
    with pytest.raises(ValueError):
        Profile((ABC, LinearOrder((0, 1))))


def test_order_display_names():
    assert str(ABC) == "a>b>c"
    assert str(LinearOrder((1, 2, 0))) == "b>c>a"
    assert str(Profile((ABC, ACB))) == "a>b>c;a>c>b"
