use ffinterval::stats::{self, CensusOptions};
use ffinterval::Mode;
use ffinterval_bench::{elliptic_interval, field_of_order, p1_interval};

#[test]
fn field_orders() {
    for (q, p, e) in [(5u64, 5, 1), (25, 5, 2), (49, 7, 2), (1_000_003, 1_000_003, 1)] {
        let f = field_of_order(q);
        assert_eq!((f.q() as u64, f.p(), f.e()), (q, p, e));
    }
}

#[test]
fn bench_intervals_are_valid() {
    let i = p1_interval(5, 5, 4);
    assert_eq!((i.m(), i.k(), i.size()), (4, 5, 3125));
    let count = stats::prime_count(&i, Mode::Exhaustive, CensusOptions::default()).unwrap();
    assert_eq!(count, 624);

    let e = elliptic_interval(25, &[1, 0, 0, 1]);
    assert_eq!((e.m(), e.k()), (8, 10));
    let h = stats::census(&e, Mode::Sample { samples: 4096, seed: 1 }, CensusOptions::default()).unwrap();
    assert_eq!(h.total, 4096);
}
