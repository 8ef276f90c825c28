//! End-to-end acceptance checks. Each criterion prints one line,
//! `PASS|FAIL <n> <name>: <detail> (<seconds>s)`.
//!
//! Criterion 2 asks the flattening bound to equal the matrix rank on every
//! non-redundant k = 2 instance. That is false when r exceeds both factor
//! sizes: then no bipartition has h1(E) = 0 and no bound exists. Its line
//! reports the literal outcome; the test instead requires that every miss
//! lies in that regime. Every other criterion must pass as stated.

mod common;

use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use tensorcert::certificate::Certificate;
use tensorcert::certify::{
    bound_cactus_rank, certify_ee4, certify_exact_rank, check_non_redundant, obstruct_alt_decompositions,
    pin_projections, verify_prop_bb, BoundReport,
};
use tensorcert::construct::{augment_decomposition, random_decomposition, random_decomposition_with, DEFAULT_BOX};
use tensorcert::kruskal::{kruskal_certificate, kruskal_rank};
use tensorcert::multiproj::AmbientTensor;
use tensorcert::symmetric::{assemble_symmetric, comon_certify, symmetric_bounds, SymPointSet};
use tensorcert::{
    Claim, Conclusion, Error, FactorPartition, FactorSubset, MultiPoint, MultiShape, PointSet, RatMatrix, Rational,
};

struct Outcome {
    pass: bool,
    detail: String,
    /// For a criterion that cannot hold as stated: whether the failures are
    /// exactly the expected ones.
    gap_explained: Option<bool>,
}


fn run(id: u32, name: &str, limit: Option<Duration>, check: impl FnOnce() -> Outcome) -> bool {
    let start = Instant::now();
    let mut out = check();
    let elapsed = start.elapsed();
    if let Some(limit) = limit {
        if elapsed >= limit {
            out.pass = false;
            out.detail.push_str(&format!("; exceeded {}s", limit.as_secs()));
        }
    }
    println!(
        "{} {id} {name}: {} ({:.2}s)",
        if out.pass { "PASS" } else { "FAIL" },
        out.detail,
        elapsed.as_secs_f64()
    );
    match out.gap_explained {
        Some(explained) if !out.pass => {
            println!("     {id}: every miss has r above both factor sizes: {explained}");
            explained
        }
        _ => out.pass,
    }
}

fn shape(dims: &[usize]) -> MultiShape {
    MultiShape::new(dims.to_vec()).unwrap()
}

fn criterion_3x4x6() -> Outcome {
    let sh = shape(&[2, 3, 5]);
    let p = FactorPartition::parse("1,2/3", 3).unwrap();
    let (mut exact, mut kruskal_fails) = (0, 0);
    for seed in 0..100 {
        let inst = random_decomposition(&sh, 6, DEFAULT_BOX, seed).unwrap();
        let cert = certify_exact_rank(&inst.tensor, &inst.set, Some(&p)).unwrap();
        if matches!(cert.conclusion, Some(Conclusion::ExactRank { rank: 6, .. })) {
            exact += 1;
        }
        let k = kruskal_certificate(&inst.set).unwrap();
        if !k.applies && k.lhs <= 13 && k.rhs == 14 {
            kruskal_fails += 1;
        }
    }
    Outcome {
        gap_explained: None,
        pass: exact >= 99 && kruskal_fails == 100,
        detail: format!("exact rank 6 on {exact}/100, Kruskal not applicable on {kruskal_fails}/100"),
    }
}

fn criterion_matrix_oracle() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let (mut considered, mut bound_ok, mut exact_ok) = (0, 0, 0);
    let mut misses_with_partition = 0;
    let mut bound_misses = Vec::new();
    for _ in 0..200 {
        let (n1, n2) = (rng.gen_range(1..=4usize), rng.gen_range(1..=6usize));
        let r = rng.gen_range(1..=5usize);
        let inst = random_decomposition_with(&shape(&[n1, n2]), r, DEFAULT_BOX, &mut rng).unwrap();
        if !check_non_redundant(&inst.tensor, &inst.set).unwrap().is_certified() {
            continue;
        }
        considered += 1;
        let flat = common::assemble(&inst.weights, inst.set.points());
        let mrank = common::rank(&common::as_matrix(&flat, n1 + 1, n2 + 1));
        let report = bound_cactus_rank(&inst.set, None).unwrap();
        if report.best_bound == mrank {
            bound_ok += 1;
        } else {
            if report.best_partition.is_some() || r <= n1.max(n2) + 1 {
                misses_with_partition += 1;
            }
            bound_misses.push(format!("({n1},{n2}) r={r}: bound {} vs rank {mrank}", report.best_bound));
        }
        let exact = certify_exact_rank(&inst.tensor, &inst.set, None).unwrap();
        if exact.is_certified() == (r == mrank) {
            exact_ok += 1;
        }
    }
    bound_misses.truncate(3);
    Outcome {
        pass: bound_ok == considered && exact_ok == considered,
        gap_explained: Some(misses_with_partition == 0 && exact_ok == considered),
        detail: format!(
            "bound = matrix rank on {bound_ok}/{considered} non-redundant, exact iff r = rank on {exact_ok}/{considered}, {misses_with_partition} misses with r within a factor size{}",
            if bound_misses.is_empty() { String::new() } else { format!("; e.g. {}", bound_misses.join(", ")) }
        ),
    }
}

fn random_sym_points(rng: &mut ChaCha8Rng, n: usize, count: usize) -> SymPointSet {
    loop {
        let pts: Vec<Vec<Rational>> = (0..count)
            .map(|_| {
                let mut v: Vec<Rational> = (0..=n).map(|_| Rational::from(rng.gen_range(-9..=9i64))).collect();
                v[0] = Rational::from(rng.gen_range(1..=9i64));
                v
            })
            .collect();
        if let Ok(a) = SymPointSet::new(n, pts) {
            return a;
        }
    }
}

fn criterion_comon() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut certified = 0;
    for _ in 0..100 {
        let a = random_sym_points(&mut rng, 2, 10);
        let weights: Vec<Rational> = (0..10)
            .map(|_| Rational::from(rng.gen_range(1..=9i64) * if rng.gen_bool(0.5) { 1 } else { -1 }))
            .collect();
        let Ok(t) = assemble_symmetric(&weights, &a, 6) else { continue };
        let cert = comon_certify(&t, &a).unwrap();
        if matches!(cert.conclusion, Some(Conclusion::SymmetricExactRank { rank: 10, .. })) {
            certified += 1;
        }
    }
    let b26 = symmetric_bounds(2, 6).unwrap();
    let b28 = symmetric_bounds(2, 8).unwrap();
    let b34 = symmetric_bounds(3, 4).unwrap();
    let table_ok = (b26.r0, b26.rg, b26.exceptional) == (10, 10, false)
        && (b28.r0, b28.rg, b28.exceptional) == (15, 15, false)
        && (b34.rg, b34.exceptional, b34.generic_rank) == (9, true, 10);
    Outcome {
        gap_explained: None,
        pass: certified == 100 && table_ok,
        detail: format!(
            "rank 10 certified on {certified}/100; bounds (2,6)=({},{},{}) (2,8)=({},{},{}) (3,4) rg={} exceptional={} generic={}",
            b26.r0, b26.rg, b26.exceptional, b28.r0, b28.rg, b28.exceptional, b34.rg, b34.exceptional, b34.generic_rank
        ),
    }
}

fn criterion_kruskal_oracle() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut agree = 0;
    let mut tested = 0;
    while tested < 100 {
        let rows = rng.gen_range(1..=5usize);
        let cols = rng.gen_range(1..=8usize);
        // Small entries and copied columns make dependent subsets common.
        let mut m = common::random_int_matrix(&mut rng, rows, cols, 2);
        if cols > 1 && rng.gen_bool(0.3) {
            let (src, dst) = (rng.gen_range(0..cols), rng.gen_range(0..cols));
            let s = common::q(rng.gen_range(1..=3));
            for row in m.iter_mut() {
                row[dst] = &row[src] * &s;
            }
        }
        if (0..cols).any(|j| m.iter().all(|r| r[j] == common::q(0))) {
            continue;
        }
        tested += 1;
        let mat = RatMatrix::from_rows(cols, common::to_rational(&m)).unwrap();
        if kruskal_rank(&mat).unwrap() == common::kruskal_rank(&m) {
            agree += 1;
        }
    }
    Outcome {
        gap_explained: None,
        pass: agree == 100,
        detail: format!("optimized = exhaustive on {agree}/100"),
    }
}

fn criterion_span_intersection() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let (mut eligible, mut passed) = (0, 0);
    for dims in [vec![1, 1], vec![1, 1, 1], vec![2, 2]] {
        let sh = shape(&dims);
        for trial in 0..100 {
            let overlap = trial % 3;
            let a_len = rng.gen_range(overlap.max(1)..=3);
            let b_len = rng.gen_range(overlap.max(1)..=3);
            let total = a_len + b_len - overlap;
            let all = random_decomposition_with(&sh, total, DEFAULT_BOX, &mut rng).unwrap().set;
            let pts = all.points();
            let a: Vec<MultiPoint> = pts[..a_len].to_vec();
            let mut b: Vec<MultiPoint> = pts[..overlap].to_vec();
            b.extend_from_slice(&pts[a_len..]);
            let a = PointSet::new(sh.clone(), a).unwrap();
            let b = PointSet::new(sh.clone(), b).unwrap();
            let cert = verify_prop_bb(&a, &b).unwrap();
            if cert.hypotheses[..2].iter().all(|h| h.is_satisfied()) {
                eligible += 1;
                let Some(Conclusion::SpanIntersectionIdentity { lhs, .. }) = cert.conclusion else {
                    continue;
                };
                let full = FactorSubset::full(dims.len());
                let ra = common::rank(&common::to_q(&a.segre_matrix(&full).row_iter().map(<[_]>::to_vec).collect::<Vec<_>>()));
                let rb = common::rank(&common::to_q(&b.segre_matrix(&full).row_iter().map(<[_]>::to_vec).collect::<Vec<_>>()));
                let stacked: Vec<Vec<Rational>> =
                    a.segre_matrix(&full).row_iter().chain(b.segre_matrix(&full).row_iter()).map(<[_]>::to_vec).collect();
                let oracle = ra as isize + rb as isize - common::rank(&common::to_q(&stacked)) as isize - 1;
                if lhs == oracle {
                    passed += 1;
                }
            }
        }
    }
    Outcome {
        gap_explained: None,
        pass: eligible > 0 && passed == eligible,
        detail: format!("identity holds on {passed}/{eligible} pairs meeting the preconditions (300 drawn)"),
    }
}

fn criterion_augmentation() -> Outcome {
    let cells: Vec<(Vec<usize>, usize)> = [vec![1, 1], vec![2, 3, 5]]
        .into_iter()
        .flat_map(|d| (1..=4).map(move |r| (d.clone(), r)))
        .collect();
    let (mut returned, mut good, mut refused) = (0, 0, 0);
    for run in 0..100u64 {
        let (dims, r) = &cells[run as usize % cells.len()];
        let inst = random_decomposition(&shape(dims), *r, DEFAULT_BOX, 1000 + run).unwrap();
        match augment_decomposition(&inst.tensor, &inst.set, &inst.weights, DEFAULT_BOX, run) {
            Ok(aug) => {
                returned += 1;
                let verified = check_non_redundant(&inst.tensor, &aug.set).unwrap().is_certified();
                if aug.set.len() == r + 1 && verified {
                    good += 1;
                }
            }
            Err(Error::Precondition(_)) if *r > shape(dims).ambient_dim() => refused += 1,
            Err(_) => {}
        }
    }
    let valid: Vec<&(Vec<usize>, usize)> = cells.iter().filter(|(d, r)| *r <= shape(d).ambient_dim()).collect();
    let mut distinct = 0;
    for run in 0..100u64 {
        let (dims, r) = valid[run as usize % valid.len()];
        let inst = random_decomposition(&shape(dims), *r, DEFAULT_BOX, 2000 + run).unwrap();
        let a = augment_decomposition(&inst.tensor, &inst.set, &inst.weights, DEFAULT_BOX, 2 * run);
        let b = augment_decomposition(&inst.tensor, &inst.set, &inst.weights, DEFAULT_BOX, 2 * run + 1);
        if let (Ok(a), Ok(b)) = (a, b) {
            let same = a.set.len() == b.set.len() && a.set.points().iter().all(|p| b.set.contains(p));
            if !same {
                distinct += 1;
            }
        }
    }
    Outcome {
        gap_explained: None,
        pass: returned > 0 && good == returned && returned + refused == 100 && distinct >= 95,
        detail: format!(
            "{good}/{returned} returned sets have r+1 verified points ({refused} refused for r > M); distinct seeds differ on {distinct}/100 pairs"
        ),
    }
}

fn criterion_small_rank() -> Outcome {
    let sh = shape(&[2, 1, 1, 1]);
    let (mut ident, mut minimal) = (0, 0);
    for seed in 0..100 {
        let two = random_decomposition(&sh, 2, DEFAULT_BOX, seed).unwrap();
        let c = certify_ee4(&two.tensor, &two.set).unwrap();
        if c.claim == Claim::Identifiable && c.conclusion == Some(Conclusion::Identifiable { rank: 2 }) {
            ident += 1;
        }
        let three = random_decomposition(&sh, 3, DEFAULT_BOX, seed).unwrap();
        let c = certify_ee4(&three.tensor, &three.set).unwrap();
        if c.claim == Claim::MinimalRank && c.conclusion == Some(Conclusion::MinimalRank { rank: 3 }) {
            minimal += 1;
        }
    }
    Outcome {
        gap_explained: None,
        pass: ident == 100 && minimal == 100,
        detail: format!("r = 2 identifiable on {ident}/100, r = 3 minimal only on {minimal}/100"),
    }
}

/// Every certificate the library produces for `(t, s)`.
fn all_certificates(t: &AmbientTensor, s: &PointSet) -> (Vec<Certificate>, BoundReport) {
    let k = s.shape().k();
    let singles: Vec<FactorSubset> = (0..k).map(FactorSubset::single).collect();
    let mut certs = vec![
        check_non_redundant(t, s).unwrap(),
        certify_exact_rank(t, s, None).unwrap(),
        certify_ee4(t, s).unwrap(),
        kruskal_certificate(s).unwrap().certificate(s.len()),
        obstruct_alt_decompositions(s, 1).unwrap(),
    ];
    let pin = pin_projections(t, s, &singles, &vec![true; k]).unwrap();
    certs.push(pin.overall);
    certs.extend(pin.per_family);
    let bound = bound_cactus_rank(s, None).unwrap();
    certs.push(bound.certificate());
    (certs, bound)
}

fn criterion_invariance() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let cases: [(&[usize], usize); 5] = [(&[1, 1], 2), (&[1, 1, 1], 2), (&[2, 3, 5], 6), (&[2, 1, 1, 1], 3), (&[1, 2, 2], 3)];
    let (mut scaling_ok, mut perm_ok) = (0, 0);
    for i in 0..50 {
        let (dims, r) = cases[i % cases.len()];
        let inst = random_decomposition_with(&shape(dims), r, DEFAULT_BOX, &mut rng).unwrap();
        let (t, s) = (&inst.tensor, &inst.set);
        let (base, base_bound) = all_certificates(t, s);

        let rescaled: Vec<MultiPoint> = s
            .points()
            .iter()
            .map(|p| {
                (0..dims.len()).fold(p.clone(), |acc, f| acc.rescaled(f, &common::random_scalar(&mut rng)).unwrap())
            })
            .collect();
        let s2 = PointSet::new(s.shape().clone(), rescaled).unwrap();
        let t2 = t.scaled(&common::random_scalar(&mut rng)).unwrap();
        let (scaled, scaled_bound) = all_certificates(&t2, &s2);
        if scaled == base && scaled_bound == base_bound {
            scaling_ok += 1;
        }

        let mut perm: Vec<usize> = (0..dims.len()).collect();
        perm.rotate_left(1 + i % dims.len().max(1));
        if rng.gen_bool(0.5) {
            perm.reverse();
        }
        let sp = s.permuted(&perm).unwrap();
        let tp = t.permuted(&perm).unwrap();
        if permutation_consistent(t, s, &tp, &sp, &perm) {
            perm_ok += 1;
        }
    }
    Outcome {
        gap_explained: None,
        pass: scaling_ok == 50 && perm_ok == 50,
        detail: format!("rescaling invariant on {scaling_ok}/50, factor permutation consistent on {perm_ok}/50"),
    }
}

fn permutation_consistent(t: &AmbientTensor, s: &PointSet, tp: &AmbientTensor, sp: &PointSet, perm: &[usize]) -> bool {
    let b = bound_cactus_rank(s, None).unwrap();
    let bp = bound_cactus_rank(sp, None).unwrap();
    let outcomes_match = b.per_partition.iter().all(|o| {
        let image = o.partition.permuted(perm);
        bp.per_partition.iter().any(|q| {
            q.partition == image && q.e == o.e && q.f == o.f && q.applicable == o.applicable && q.bound == o.bound
        })
    });
    let exact = certify_exact_rank(t, s, None).unwrap();
    let exact_p = certify_exact_rank(tp, sp, None).unwrap();
    let exact_match = match (&exact.conclusion, &exact_p.conclusion) {
        (None, None) => true,
        (
            Some(Conclusion::ExactRank { rank: a, .. }),
            Some(Conclusion::ExactRank { rank: b, partition: Some(p) }),
        ) => {
            a == b
                && bp
                    .per_partition
                    .iter()
                    .any(|q| &q.partition == p && q.e.h1 == 0 && q.f.h1 == 0)
        }
        (Some(a), Some(b)) => a == b,
        _ => false,
    };
    let k = kruskal_certificate(s).unwrap();
    let kp = kruskal_certificate(sp).unwrap();
    let kruskal_match = perm.iter().enumerate().all(|(j, &old)| kp.per_factor[j] == k.per_factor[old])
        && (k.lhs, k.rhs, k.applies) == (kp.lhs, kp.rhs, kp.applies);
    let ee4 = certify_ee4(t, s).unwrap();
    let ee4p = certify_ee4(tp, sp).unwrap();
    let nr = check_non_redundant(t, s).unwrap() == check_non_redundant(tp, sp).unwrap();
    outcomes_match
        && b.best_bound == bp.best_bound
        && exact_match
        && kruskal_match
        && ee4.claim == ee4p.claim
        && ee4.conclusion == ee4p.conclusion
        && nr
}

#[test]
fn acceptance() {
    let ten = Some(Duration::from_secs(10));
    let results = [
        run(1, "3x4x6 rank six versus Kruskal", ten, criterion_3x4x6),
        run(2, "k = 2 matrix-rank oracle", ten, criterion_matrix_oracle),
        run(3, "symmetric flattening certificates", ten, criterion_comon),
        run(4, "Kruskal rank versus exhaustive oracle", Some(Duration::from_secs(30)), criterion_kruskal_oracle),
        run(5, "span intersection identity", None, criterion_span_intersection),
        run(6, "non-redundant augmentation", None, criterion_augmentation),
        run(7, "small-rank criterion on 3x2x2x2", None, criterion_small_rank),
        run(8, "rescaling and permutation invariance", None, criterion_invariance),
    ];
    let failed: Vec<usize> = results.iter().enumerate().filter(|(_, &ok)| !ok).map(|(i, _)| i + 1).collect();
    assert!(failed.is_empty(), "failing criteria: {failed:?}");
}
