use f2dense::gauss::PlsResult;
use f2dense::m4ri::make_table;
use f2dense::pls::hybrid_rref_report;
use f2dense::selftest::random_of_rank;
use f2dense::*;

fn cfg(alg: Algorithm, cutoff: usize) -> EliminationConfig {
    EliminationConfig { cutoff_bytes: cutoff, ..EliminationConfig::with_algorithm(alg) }
}

fn rref_with(a: &BitMatrix, c: &EliminationConfig) -> (usize, BitMatrix) {
    let mut x = a.clone();
    let r = rref(&mut x, c).unwrap();
    (r, x)
}

#[test]
fn cutoff_does_not_change_rank_or_rref() {
    for seed in 0..12 {
        let d = [0.5, 0.1, 0.02][seed as usize % 3];
        let a = BitMatrix::random(300 + seed as usize, 280, d, seed);
        let base = rref_with(&a, &cfg(Algorithm::Gauss, 1));
        let reference = PlsResult::gauss(&a);
        for cutoff in [1, 4096, 1 << 30] {
            assert_eq!(rref_with(&a, &cfg(Algorithm::Pls, cutoff)), base, "seed {seed} cutoff {cutoff}");
            let res = pls_decompose(&a, &cfg(Algorithm::Pls, cutoff)).unwrap();
            assert_eq!(res.reconstruct(), a);
            assert_eq!(res, reference);
        }
    }
}

#[test]
fn cuts_fall_on_word_boundaries() {
    for (m, n) in [(512, 512), (300, 700), (200, 129), (1000, 200)] {
        let a = BitMatrix::random(m, n, 0.5, 4);
        instrument::reset();
        pls_decompose(&a, &cfg(Algorithm::Pls, 1)).unwrap();
        let cuts = instrument::snapshot().column_cuts;
        assert!(!cuts.is_empty());
        for (cols, cut) in cuts {
            if cols >= 128 {
                assert_eq!(cut % 64, 0, "{m}x{n}: window of {cols} columns cut at {cut}");
            }
        }
    }
}

#[test]
fn recursion_is_in_place() {
    for (m, n) in [(1024, 1024), (700, 1500), (1500, 300)] {
        let a = BitMatrix::random(m, n, 0.5, 8);
        let c = EliminationConfig { k: 6, ..cfg(Algorithm::Pls, 4096) };
        instrument::reset();
        pls_decompose(&a, &c).unwrap();
        let s = instrument::snapshot();
        let word = std::mem::size_of::<usize>();
        assert_eq!(s.index_bytes_peak, (m + n) * word);
        let stride = n.div_ceil(64);
        let one_table = ((1 << 6) * stride + 6 * stride + (1 << 6)) * 8;
        assert!(s.table_bytes_peak <= one_table, "{m}x{n}: {} > {one_table}", s.table_bytes_peak);
    }
}

#[test]
fn low_rank_costs_fewer_row_additions() {
    let n = 512;
    let full = BitMatrix::random(n, n, 0.5, 1);
    for alg in [Algorithm::M4ri, Algorithm::Mmpf, Algorithm::Pls] {
        let count = |a: &BitMatrix| {
            instrument::reset();
            rref_with(a, &cfg(alg, 4096));
            instrument::snapshot().row_additions
        };
        let high = count(&full);
        for r in [1, n / 16, n / 4] {
            let low = count(&random_of_rank(n, n, r, r as u64));
            assert!(low < high, "{alg}: rank {r} used {low} row additions, full rank {high}");
        }
    }
}

#[test]
fn exact_ranks() {
    for n in [64, 100, 256] {
        for r in [0, 1, n / 4, n / 2, n] {
            for m in [n, n + 37] {
                let a = random_of_rank(m, n, r, (m * n + r) as u64);
                for alg in Algorithm::ALL {
                    assert_eq!(rank(&a, &cfg(alg, 1)).unwrap(), r, "{alg} {m}x{n} rank {r}");
                }
            }
        }
    }
}

#[test]
fn table_cost_is_two_to_the_k_minus_one() {
    let a = BitMatrix::random(64, 300, 0.5, 2);
    for k in 1..=8 {
        instrument::reset();
        let t = make_table(&a, 3, 17, k);
        let s = instrument::snapshot();
        assert_eq!(s.table_row_additions, (1 << k) - 1);
        assert_eq!(s.tables_built, 1);
        assert_eq!(t.rows().nrows(), 1 << k);
    }
}

#[test]
fn hybrid_switching() {
    let dense = BitMatrix::random(400, 400, 0.5, 5);
    let sparse = BitMatrix::random(400, 400, 0.02, 5);
    let (r_dense, want_dense) = rref_with(&dense, &cfg(Algorithm::Gauss, 1));
    let (r_sparse, want_sparse) = rref_with(&sparse, &cfg(Algorithm::Gauss, 1));

    let run = |a: &BitMatrix, th: f64| {
        let mut x = a.clone();
        let c = EliminationConfig { hybrid_threshold: th, ..cfg(Algorithm::Hybrid, 4096) };
        let rep = hybrid_rref_report(&mut x, &c).unwrap();
        (rep, x)
    };

    let (rep, x) = run(&dense, 1.0);
    assert_eq!(rep.switched_at, None);
    assert_eq!((rep.rank, &x), (r_dense, &want_dense));

    let (rep, x) = run(&dense, 0.0);
    assert_eq!(rep.switched_at, Some((0, 0)));
    assert_eq!((rep.rank, &x), (r_dense, &want_dense));

    let (rep, x) = run(&sparse, 0.15);
    let (row, col) = rep.switched_at.expect("fill-in reaches 0.15");
    assert!(row > 0 && col >= row);
    assert!(rep.switch_density.unwrap() >= 0.15);
    assert_eq!((rep.rank, &x), (r_sparse, &want_sparse));
}

#[test]
fn rref_from_pls_rejects_bad_input() {
    let a = BitMatrix::random(20, 30, 0.5, 1);
    let res = pls_decompose(&a, &cfg(Algorithm::Pls, 1)).unwrap();
    let mut x = res.matrix.clone();
    assert!(rref_from_pls(&mut x, res.rank + 1, &res.p, &res.q).is_err());
    let short = Permutation::identity(3);
    assert!(rref_from_pls(&mut x, res.rank, &short, &res.q).is_err());
    let mut zero = BitMatrix::new(20, 30);
    assert!(matches!(
        rref_from_pls(&mut zero, res.rank, &res.p, &res.q),
        Err(Error::InconsistentDecomposition(_))
    ));
}

#[test]
fn config_and_argument_errors() {
    for bad in [
        EliminationConfig { k: 17, ..Default::default() },
        EliminationConfig { hybrid_threshold: 1.5, ..Default::default() },
        EliminationConfig { cutoff_bytes: 0, ..Default::default() },
    ] {
        assert!(matches!(bad.validate(), Err(Error::InvalidConfig(_))));
        assert!(rref(&mut BitMatrix::identity(3), &bad).is_err());
    }
    assert_eq!("HYBRID".parse::<Algorithm>().unwrap(), Algorithm::Hybrid);
    assert!("strassen".parse::<Algorithm>().is_err());

    let a = BitMatrix::new(3, 4);
    assert!(matches!(mul_naive(&a, &a), Err(Error::DimensionMismatch(_))));
    assert!(matches!(a.window(0, 0, 4, 4), Err(Error::WindowOutOfBounds { .. })));
    assert!(pls_decompose(&a, &cfg(Algorithm::M4ri, 1)).is_err());

    let mut big = BitMatrix::random(10, 10, 0.5, 1);
    let r = |r0, c0, r1, c1| Rect::new(r0, c0, r1, c1);
    assert!(matches!(addmul_within(&mut big, r(0, 0, 4, 4), r(2, 2, 6, 6), r(6, 6, 10, 10)), Err(Error::Aliasing)));
    addmul_within(&mut big, r(0, 0, 4, 4), r(4, 0, 8, 4), r(6, 6, 10, 10)).unwrap();
}

#[test]
fn matrices_with_structure() {
    let mut dup = BitMatrix::random(40, 90, 0.5, 3);
    for i in 20..40 {
        for j in 0..90 {
            let v = dup.get(i - 20, j);
            dup.set(i, j, v);
        }
    }
    let mut zero_cols = BitMatrix::random(70, 150, 0.5, 6);
    for i in 0..70 {
        for j in (0..150).step_by(3) {
            zero_cols.set(i, j, false);
        }
    }
    for a in [dup, zero_cols, BitMatrix::identity(130), BitMatrix::random(5, 300, 0.5, 1), BitMatrix::random(300, 5, 0.5, 1)] {
        let reference = PlsResult::gauss(&a);
        assert_eq!(reference.reconstruct(), a);
        for alg in [Algorithm::Mmpf, Algorithm::Pls] {
            assert_eq!(pls_decompose(&a, &cfg(alg, 1)).unwrap(), reference);
        }
        let want = rref_with(&a, &cfg(Algorithm::Gauss, 1));
        for alg in Algorithm::ALL {
            assert_eq!(rref_with(&a, &cfg(alg, 1)), want, "{alg}");
        }
    }
}
