from roabp_pit.field import is_prime


def next_prime(n: int) -> int:
    k = max(n, 2)
    while not is_prime(k):
        k += 1
    return k
