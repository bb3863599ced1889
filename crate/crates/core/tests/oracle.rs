//! Library results against the exhaustive dense references.

use exuberance::datestamp::{search_model, select_model_bic, sign_stamp, BubbleModel};
use exuberance::recursive::{gsadf, hb_sup_chow, sadf, sadf_gls_with, sbz, sign_statistics, time_transformed_tests, SignMode};
use exuberance::rng::stream;
use exuberance::{AdfConfig, DetSpec, Series};
use exuberance_testkit as tk;
use rand::Rng;
use rand_distr::StandardNormal;

const TOL: f64 = 1e-9;

fn series(seed: u64, n: usize, drift: f64) -> Series {
    let mut rng = stream(seed, 7);
    let mut y = 0.0;
    let v = (0..n)
        .map(|_| {
            let z: f64 = rng.sample(StandardNormal);
            y += drift + z;
            y
        })
        .collect();
    Series::new(v).unwrap()
}

fn det_code(d: DetSpec) -> usize {
    match d {
        DetSpec::None => 0,
        DetSpec::Constant => 1,
        DetSpec::Trend => 2,
    }
}

#[test]
fn adf_family_matches_dense() {
    for seed in 0..25 {
        let y = series(seed, 18 + (seed as usize % 12), 0.1);
        let v = y.values();
        for det in [DetSpec::None, DetSpec::Constant, DetSpec::Trend] {
            for k in [0, 1] {
                let cfg = AdfConfig::new(det, k);
                let tau0 = 0.4;
                let s = sadf(&y, tau0, cfg).unwrap();
                let (ov, oe) = tk::sadf(v, tau0, det_code(det), k).unwrap();
                assert!((s.value - ov).abs() < TOL, "sadf seed {seed} {det:?} k={k}");
                assert_eq!(s.argmax_index.1, oe);
                let g = gsadf(&y, tau0, cfg).unwrap();
                let ((gv, gs, ge), bs) = tk::gsadf(v, tau0, det_code(det), k).unwrap();
                assert!((g.value - gv).abs() < TOL, "gsadf seed {seed} {det:?} k={k}");
                assert_eq!(g.argmax_index, (gs, ge));
                for (a, b) in g.sequence.unwrap().values().zip(bs) {
                    match (a, b) {
                        (Some(a), Some(b)) => assert!((a - b).abs() < TOL),
                        (None, None) => {}
                        other => panic!("bsadf mismatch {other:?}"),
                    }
                }
            }
        }
    }
}

#[test]
fn hb_and_gls_match_dense() {
    for seed in 0..25 {
        let y = series(100 + seed, 20 + (seed as usize % 10), 0.0);
        let v = y.values();
        for k in [0, 1] {
            let h = hb_sup_chow(&y, 0.2, k).unwrap();
            let (hv, hbk) = tk::hb(v, 0.2, k).unwrap();
            assert!((h.value - hv).abs() < TOL);
            assert_eq!(h.argmax_index.0, hbk);
        }
        for (det, c) in [(DetSpec::Constant, 1.6), (DetSpec::Trend, 2.4)] {
            let g = sadf_gls_with(&y, 0.4, det, None, 0).unwrap();
            let (gv, ge) = tk::sadf_gls(v, 0.4, det_code(det), c, 0).unwrap();
            assert!((g.value - gv).abs() < TOL, "gls seed {seed}");
            assert_eq!(g.argmax_index.1, ge);
        }
    }
}

#[test]
fn variance_weighted_match_dense() {
    for seed in 0..25 {
        let y = series(200 + seed, 20 + (seed as usize % 11), 0.05);
        let v = y.values();
        let s = sbz(&y, 0.3, None).unwrap();
        let (sv, se) = tk::sbz(v, 0.3).unwrap();
        assert!((s.value - sv).abs() < TOL);
        assert_eq!(s.argmax_index.1, se);
        let t = time_transformed_tests(&y, 0.3).unwrap();
        let (st, gt) = tk::tadf(v, 0.3);
        let (a, ae) = st.unwrap();
        let (b, bs, be) = gt.unwrap();
        assert!((t.stadf.value - a).abs() < TOL);
        assert_eq!(t.stadf.argmax_index.1, ae);
        assert!((t.gstadf.value - b).abs() < TOL);
        assert_eq!(t.gstadf.argmax_index, (bs, be));
    }
}

#[test]
fn sign_family_matches_dense() {
    for seed in 0..25 {
        let y = series(300 + seed, 15 + (seed as usize % 15), 0.2);
        let v = y.values();
        for (mode, dm) in [(SignMode::Raw, false), (SignMode::Demeaned, true)] {
            for k in [0, 1] {
                let r = sign_statistics(&y, 0.3, mode, k).unwrap();
                let (s, g) = tk::sign_sups(v, 0.3, dm, k);
                let (sv, se) = s.unwrap();
                let (gv, gs, ge) = g.unwrap();
                assert!((r.ssadf.value - sv).abs() < TOL);
                assert_eq!(r.ssadf.argmax_index.1, se);
                assert!((r.sgsadf.value - gv).abs() < TOL);
                assert_eq!(r.sgsadf.argmax_index, (gs, ge));
            }
        }
        let st = sign_stamp(&y, 0.3).unwrap();
        let (ov, os, oe) = tk::sign_stamp(v, 0.3, 0.01).unwrap();
        assert!((st.value - ov).abs() < TOL);
        assert_eq!((st.episode.origin_index, st.episode.collapse_index), (os, oe));
    }
}

#[test]
fn model_search_matches_dense() {
    for seed in 0..10 {
        let y = series(400 + seed, 16 + (seed as usize % 8), 0.3);
        for (m, model) in BubbleModel::ALL.into_iter().enumerate() {
            let got = search_model(&y, model, 3);
            let want = tk::bubble_search(y.values(), m as u8 + 1, 3);
            match (got, want) {
                (Some((ssr, d)), Some((ossr, t1, t2, t3))) => {
                    assert!((ssr - ossr).abs() < TOL * ossr.max(1.0), "model {m} seed {seed}");
                    assert_eq!((d.t1, d.t2, d.t3), (t1, t2, t3), "model {m} seed {seed}");
                }
                (None, None) => {}
                other => panic!("model {m} seed {seed}: {other:?}"),
            }
        }
        let sel = select_model_bic(&y, 3).unwrap();
        assert!(sel.candidates.iter().all(|c| c.bic >= sel.candidates.iter().find(|x| x.model == sel.model).unwrap().bic));
    }
}
