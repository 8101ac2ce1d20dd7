//! Frozen expected values. The random streams, ranks and echelon forms below
//! were checked against an independent GF(2) implementation.

use f2dense::gauss::{is_rref, PlsResult};
use f2dense::*;

fn m(s: &str) -> BitMatrix {
    s.parse().unwrap()
}

fn all_configs() -> Vec<EliminationConfig> {
    let mut v: Vec<_> = Algorithm::ALL.into_iter().map(EliminationConfig::with_algorithm).collect();
    v.push(EliminationConfig { cutoff_bytes: 1, ..EliminationConfig::with_algorithm(Algorithm::Pls) });
    v.push(EliminationConfig { hybrid_threshold: 0.0, ..EliminationConfig::with_algorithm(Algorithm::Hybrid) });
    v
}

#[test]
fn splitmix_stream_is_frozen() {
    assert_eq!(BitMatrix::random(1, 64, 0.5, 42).row(0)[0], 0x987c_e6b8_0327_8d5e);
    assert_eq!(BitMatrix::random(1, 64, 0.1, 7).row(0)[0], 0x0010_1810_8400_0002);
    assert!(BitMatrix::random(9, 70, 0.0, 1).is_zero());
    assert_eq!(BitMatrix::random(9, 70, 1.0, 1).count_ones(), 9 * 70);
}

#[test]
fn small_rref_is_frozen() {
    let a = BitMatrix::random(6, 9, 0.5, 3);
    assert_eq!(a, m("100110101;000110011;100001001;100001011;101110001;001010000"));
    let want = m("100000100;001000100;000100101;000010100;000001101;000000010");
    for cfg in all_configs() {
        let mut x = a.clone();
        assert_eq!(rref(&mut x, &cfg).unwrap(), 6, "{}", cfg.algorithm);
        assert_eq!(x, want, "{}", cfg.algorithm);
    }
}

#[test]
fn small_pls_is_frozen() {
    let a = BitMatrix::random(6, 9, 0.5, 3);
    let packed = m("100110101;110000100;101011100;010100100;001010111;101001000");
    for alg in [Algorithm::Gauss, Algorithm::Mmpf, Algorithm::Pls] {
        let res = pls_decompose(&a, &EliminationConfig::with_algorithm(alg)).unwrap();
        assert_eq!(res.rank, 6);
        assert_eq!(res.p.as_slice(), &[0, 4, 2, 5, 4, 5]);
        assert_eq!(res.q.as_slice(), &[0, 2, 3, 4, 5, 7, 6, 7, 8]);
        assert_eq!(res.matrix, packed, "{alg}");
        assert_eq!(res.reconstruct(), a);
    }
}

#[test]
fn ranks_are_frozen() {
    for (n, d, seed, r, ones) in [(64, 0.5, 42, 63, 2059), (100, 0.5, 1, 98, 5164), (128, 0.1, 9, 127, 1672), (200, 0.01, 5, 158, 404)] {
        let a = BitMatrix::random(n, n, d, seed);
        assert_eq!(a.count_ones(), ones);
        for cfg in all_configs() {
            assert_eq!(rank(&a, &cfg).unwrap(), r, "{} on {n} {d} {seed}", cfg.algorithm);
        }
    }
}

#[test]
fn hand_examples() {
    let res = PlsResult::gauss(&m("11;10"));
    assert_eq!(res.matrix, m("11;11"));
    assert_eq!(res.l(), m("10;11"));
    assert_eq!(res.s(), m("11;01"));

    let res = PlsResult::gauss(&m("01;10"));
    assert_eq!(res.p.as_slice(), &[1, 1]);

    let mut x = m("11;01");
    assert_eq!(m4ri_rref(&mut x, 2), 2);
    assert_eq!(x, BitMatrix::identity(2));

    assert_eq!(mul_naive(&m("11;01"), &m("10;11")).unwrap(), m("01;11"));
    assert_eq!(mul_m4rm(&m("1"), &m("1"), 1).unwrap(), m("1"));

    let l = m("10;11");
    let mut b = m("1;0");
    trsm_lower_left_unit(&l.as_window(), &mut b.as_window_mut()).unwrap();
    assert_eq!(b, m("1;1"));
}

#[test]
fn degenerate_shapes() {
    for (r, c) in [(1, 1), (1, 200), (200, 1), (3, 0), (0, 3), (0, 0)] {
        for d in [0.0, 1.0] {
            let a = BitMatrix::random(r, c, d, 1);
            let mut want = a.clone();
            let rk = gauss_rref(&mut want);
            assert!(is_rref(&want));
            for cfg in all_configs() {
                let mut x = a.clone();
                assert_eq!(rref(&mut x, &cfg).unwrap(), rk, "{} on {r}x{c}", cfg.algorithm);
                assert_eq!(x, want);
            }
        }
    }
}
