//! Acceptance suite: one test per criterion, each printing a pass line
//! with its measured runtime (visible with `--nocapture`). Expected values
//! come from independent oracles implemented here in plain integer
//! arithmetic, never from the code paths they check.

use std::collections::{BTreeSet, HashMap};
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use latile_core::cluster::{all_fibers_divisible, line_fibers, prism_decompose, Cluster};
use latile_core::cyclotomic::{phi_prime_power_check, root_power_sum};
use latile_core::lattice::{IntVec, Sublattice};
use latile_core::polyseq::{
    classify_weyl, is_annihilated, solve_unipotent, LaurentOperator, WeylClass,
};
use latile_core::spectral::{
    compute_delta, kernel_intersection_lines, line_in_z,
    precursor_conclusion_check, support_dichotomy, z_membership, RationalTorusPoint,
    SupportDichotomy,
};
use latile_core::tiler::{
    dilation_check, tile_1d, verify_tiling, word_tiles_line, PeriodicTiling,
};
use latile_core::trichotomy::classify;

fn finish(name: &str, detail: String, started: Instant, cap: Duration) {
    let elapsed = started.elapsed();
    println!("{name}: PASS ({detail}, {:.2}s)", elapsed.as_secs_f64());
    assert!(
        elapsed < cap,
        "{name} exceeded its time budget: {:.2}s >= {:.2}s",
        elapsed.as_secs_f64(),
        cap.as_secs_f64()
    );
}

// ---------------------------------------------------------------------
// Shared corpus: all translation-normalized four-point clusters in the
// 3x3x3 box.

type Pt = [i64; 3];

/// Every four-point subset of the 3x3x3 box, translation-normalized so the
/// minimum of each coordinate is zero; the second component counts the
/// distinct normalized clusters.
fn normalized_four_point_clusters() -> (Vec<[Pt; 4]>, usize) {
    let cells: Vec<Pt> = (0..27)
        .map(|i| [(i / 9) as i64, (i / 3 % 3) as i64, (i % 3) as i64])
        .collect();
    let mut all: Vec<[Pt; 4]> = Vec::new();
    let mut seen: BTreeSet<[Pt; 4]> = BTreeSet::new();
    for a in 0..27 {
        for b in a + 1..27 {
            for c in b + 1..27 {
                for d in c + 1..27 {
                    let mut pts = [cells[a], cells[b], cells[c], cells[d]];
                    for axis in 0..3 {
                        let min = pts.iter().map(|p| p[axis]).min().unwrap();
                        for p in pts.iter_mut() {
                            p[axis] -= min;
                        }
                    }
                    pts.sort();
                    all.push(pts);
                    seen.insert(pts);
                }
            }
        }
    }
    (all, seen.len())
}

fn cluster_of(pts: &[Pt]) -> Cluster {
    let rows: Vec<&[i64]> = pts.iter().map(|p| p.as_slice()).collect();
    Cluster::from_i64(&rows)
}

fn sub3(a: Pt, b: Pt) -> Pt {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}

fn det3(a: Pt, b: Pt, c: Pt) -> i64 {
    a[0] * (b[1] * c[2] - b[2] * c[1]) - a[1] * (b[0] * c[2] - b[2] * c[0])
        + a[2] * (b[0] * c[1] - b[1] * c[0])
}

fn parallel(a: Pt, b: Pt) -> bool {
    a[0] * b[1] == a[1] * b[0] && a[0] * b[2] == a[2] * b[0] && a[1] * b[2] == a[2] * b[1]
}

/// Rank over the rationals of the difference set, by direct minor checks.
fn diff_rank(pts: &[Pt; 4]) -> usize {
    let diffs: Vec<Pt> = pts[1..].iter().map(|p| sub3(*p, pts[0])).collect();
    if diffs.iter().any(|d| det3(diffs[0], diffs[1], *d) != 0)
        || det3(diffs[0], diffs[1], diffs[2]) != 0
    {
        return 3;
    }
    for i in 0..diffs.len() {
        for j in i + 1..diffs.len() {
            if !parallel(diffs[i], diffs[j]) {
                return 2;
            }
        }
    }
    if diffs.iter().any(|d| *d != [0, 0, 0]) {
        1
    } else {
        0
    }
}

/// Brute-force prism existence for a four-point cluster.
///
/// Every cluster whose differences span rank at most two fits in one coset
/// of a rank-2 base, which is a single-offset prism. A rank-3 cluster can
/// only be two translated copies of a two-point foundation; the base
/// exists exactly when the translate is not parallel to the foundation
/// difference.
fn oracle_prism_exists(pts: &[Pt; 4]) -> bool {
    if diff_rank(pts) <= 2 {
        return true;
    }
    let idx = [[0usize, 1, 2, 3], [0, 2, 1, 3], [0, 3, 1, 2]];
    for [a, b, c, d] in idx {
        let (pa, pb, pc, pd) = (pts[a], pts[b], pts[c], pts[d]);
        // Foundation {pa, pb}, second copy {pc, pd} in either pairing.
        for (qc, qd) in [(pc, pd), (pd, pc)] {
            let w = sub3(qc, pa);
            if w == [0, 0, 0] || sub3(qd, pb) != w {
                continue;
            }
            if !parallel(w, sub3(pb, pa)) {
                return true;
            }
        }
    }
    false
}

#[test]
fn criterion_1_prism_search_agrees_with_brute_force() {
    let started = Instant::now();
    let (corpus, distinct) = normalized_four_point_clusters();
    let mut decomposed = 0usize;
    for pts in &corpus {
        let f = cluster_of(pts);
        let got = prism_decompose(&f).unwrap();
        let expected = oracle_prism_exists(pts);
        assert_eq!(
            got.is_some(),
            expected,
            "prism disagreement on {pts:?}"
        );
        if let Some(prism) = got {
            prism.validate(&f).unwrap();
            decomposed += 1;
        }
    }
    finish(
        "acceptance 1 (prism search vs brute force)",
        format!(
            "{} cluster instances ({distinct} distinct), {decomposed} prisms",
            corpus.len()
        ),
        started,
        Duration::from_secs(60),
    );
}

/// Brute-force plane divisibility: every plane parallel to `g` must meet
/// the cluster in an even number of points. Planes that matter either cut
/// a single line of the cluster or are spanned by two of its points
/// together with `g`.
fn oracle_planes_even(pts: &[Pt; 4], g: Pt) -> bool {
    for (i, &x) in pts.iter().enumerate() {
        let on_line = pts
            .iter()
            .filter(|&&y| parallel(sub3(y, x), g))
            .count();
        let _ = i;
        if on_line % 2 != 0 {
            return false;
        }
    }
    for i in 0..4 {
        for j in i + 1..4 {
            let span = sub3(pts[j], pts[i]);
            if parallel(span, g) {
                continue;
            }
            let coplanar = pts
                .iter()
                .filter(|&&y| det3(sub3(y, pts[i]), span, g) == 0)
                .count();
            if coplanar % 2 != 0 {
                return false;
            }
        }
    }
    true
}

#[test]
fn criterion_2_line_divisibility_matches_plane_divisibility() {
    let started = Instant::now();
    let (corpus, _) = normalized_four_point_clusters();
    let mut directions: Vec<Pt> = Vec::new();
    for x in -2i64..=2 {
        for y in -2i64..=2 {
            for z in -2i64..=2 {
                if [x, y, z] != [0, 0, 0] {
                    directions.push([x, y, z]);
                }
            }
        }
    }
    let mut checked = 0usize;
    for pts in &corpus {
        let f = cluster_of(pts);
        for &g in &directions {
            let gv = IntVec::from_i64(&g);
            let lines_even = all_fibers_divisible(&line_fibers(&f, &gv).unwrap(), 2);
            let planes_even = oracle_planes_even(pts, g);
            assert_eq!(
                lines_even, planes_even,
                "divisibility disagreement on {pts:?} along {g:?}"
            );
            checked += 1;
        }
    }
    finish(
        "acceptance 2 (line vs plane divisibility)",
        format!("{checked} cluster-direction pairs"),
        started,
        Duration::from_secs(120),
    );
}

// ---------------------------------------------------------------------
// One-dimensional tilings.

/// Reduce a periodic word to its minimal period and lexicographically
/// smallest rotation.
fn canonical_word(word: &[u8]) -> String {
    let n = word.len();
    let mut q = n;
    for cand in 1..=n {
        if n.is_multiple_of(cand) && (0..n).all(|i| word[i] == word[i % cand]) {
            q = cand;
            break;
        }
    }
    let base = &word[..q];
    let mut best = base.to_vec();
    for s in 1..q {
        let rot: Vec<u8> = (0..q).map(|i| base[(i + s) % q]).collect();
        if rot < best {
            best = rot;
        }
    }
    String::from_utf8(best).unwrap()
}

/// Depth-first enumeration of periodic line tilings inside a bounded
/// window, from every possible boundary overhang, with cycle detection on
/// the window coverage state. Emitted words are independently verified.
fn oracle_line_tilings(offsets: &[u32]) -> BTreeSet<String> {
    let diam = *offsets.last().unwrap() as usize;
    let window = 4 * diam + 8;
    let mut words = BTreeSet::new();
    for overhang in 0..(1u64 << diam) {
        let len = window + diam + 1;
        let mut covered = vec![false; len];
        for b in 0..diam {
            if overhang >> b & 1 == 1 {
                covered[b] = true;
            }
        }
        let mut placed = vec![false; len];
        let mut seen: HashMap<u64, usize> = HashMap::new();
        let mut cell = 0usize;
        while cell + diam < len {
            let mut state = 0u64;
            for b in 0..diam {
                if covered[cell + b] {
                    state |= 1 << b;
                }
            }
            if let Some(&prev) = seen.get(&state) {
                let word: Vec<u8> = (prev..cell)
                    .map(|i| if placed[i] { b'1' } else { b'0' })
                    .collect();
                if !word.is_empty() && word_tiles_line(&word, offsets) {
                    words.insert(canonical_word(&word));
                }
                break;
            }
            seen.insert(state, cell);
            if !covered[cell] {
                if offsets.iter().any(|&o| covered[cell + o as usize]) {
                    break; // overlap: dead end
                }
                for &o in offsets {
                    covered[cell + o as usize] = true;
                }
                placed[cell] = true;
            }
            cell += 1;
        }
    }
    words
}

fn one_dim_tiling_from_word(word: &str) -> PeriodicTiling {
    let n = word.len() as i64;
    let period = Sublattice::from_generators(1, &[IntVec::from_i64(&[n])]).unwrap();
    let reps: Vec<IntVec> = word
        .bytes()
        .enumerate()
        .filter(|&(_, b)| b == b'1')
        .map(|(i, _)| IntVec::from_i64(&[i as i64]))
        .collect();
    PeriodicTiling::new(period, reps).unwrap()
}

#[test]
fn criterion_3_line_tiler_agrees_with_enumeration() {
    let started = Instant::now();
    let mut clusters = 0usize;
    for bits in 0u32..256 {
        // Subsets of [0, 8] containing 0: bit i encodes membership of i+1.
        let mut offsets = vec![0u32];
        for i in 0..8 {
            if bits >> i & 1 == 1 {
                offsets.push(i + 1);
            }
        }
        let pts: Vec<Vec<i64>> = offsets.iter().map(|&o| vec![o as i64]).collect();
        let refs: Vec<&[i64]> = pts.iter().map(|p| p.as_slice()).collect();
        let f = Cluster::from_i64(&refs);

        let report = tile_1d(&f).unwrap();
        let expected = oracle_line_tilings(&offsets);
        let got: BTreeSet<String> = report
            .tilings
            .iter()
            .map(|w| canonical_word(w.as_bytes()))
            .collect();
        assert_eq!(got, expected, "tiling sets differ for offsets {offsets:?}");
        assert_eq!(report.exact, !expected.is_empty());
        for word in &report.tilings {
            assert_eq!(word.len() as u64, report.uniform_period);
            assert!(word_tiles_line(word.as_bytes(), &offsets));
        }
        clusters += 1;
    }
    finish(
        "acceptance 3 (line tiler vs window enumeration)",
        format!("{clusters} clusters"),
        started,
        Duration::from_secs(30),
    );
}

#[test]
fn criterion_4_dilation_invariance_of_found_tilings() {
    let started = Instant::now();
    let mut checks = 0usize;

    // Every tiling emitted by the line tiler.
    for bits in 0u32..256 {
        let mut offsets = vec![0u32];
        for i in 0..8 {
            if bits >> i & 1 == 1 {
                offsets.push(i + 1);
            }
        }
        let pts: Vec<Vec<i64>> = offsets.iter().map(|&o| vec![o as i64]).collect();
        let refs: Vec<&[i64]> = pts.iter().map(|p| p.as_slice()).collect();
        let f = Cluster::from_i64(&refs);
        let report = tile_1d(&f).unwrap();
        let size = offsets.len() as u64;
        for word in &report.tilings {
            let tiling = one_dim_tiling_from_word(word);
            for alpha in 1..=2 * size + 1 {
                if num_integer::Integer::gcd(&alpha, &size) != 1 {
                    continue;
                }
                assert!(
                    dilation_check(&f, &tiling, alpha).unwrap(),
                    "dilation by {alpha} failed for offsets {offsets:?}"
                );
                checks += 1;
            }
        }
    }

    // Every tiling embedded in a classification fixture.
    for (f, p, _tag) in classification_fixtures() {
        if let Some(tiling) = classify(&f, p, 96).unwrap().case.tiling() {
            let size = f.len() as u64;
            for alpha in 1..=2 * size + 1 {
                if num_integer::Integer::gcd(&alpha, &size) != 1 {
                    continue;
                }
                assert!(dilation_check(&f, tiling, alpha).unwrap());
                checks += 1;
            }
        }
    }
    finish(
        "acceptance 4 (dilation invariance)",
        format!("{checks} dilation checks"),
        started,
        Duration::from_secs(120),
    );
}

#[test]
fn criterion_5_cyclotomic_exactness() {
    let started = Instant::now();

    // Random power sums cross-checked against floating evaluation with a
    // wide separation band.
    let mut rng = ChaCha8Rng::seed_from_u64(0x1a71_1e00);
    for _ in 0..10_000 {
        let n = rng.gen_range(1..=60u64);
        let m = rng.gen_range(1..=12usize);
        let exps: Vec<i64> = (0..m).map(|_| rng.gen_range(-100..=100)).collect();
        let exact_zero = root_power_sum(n, &exps).is_zero();
        let (mut re, mut im) = (0f64, 0f64);
        for &a in &exps {
            let theta = std::f64::consts::TAU * (a.rem_euclid(n as i64) as f64) / (n as f64);
            re += theta.cos();
            im += theta.sin();
        }
        let modulus = (re * re + im * im).sqrt();
        assert!(
            !(1e-9..=1e-3).contains(&modulus),
            "ambiguous modulus {modulus} for order {n}, exponents {exps:?}"
        );
        assert_eq!(exact_zero, modulus < 1e-9);
    }

    // Vanishing sums at prime-power orders have length divisible by the
    // prime: exhaustive over short multisets.
    let mut multisets = 0u64;
    for (p, k) in [(2u64, 1u32), (2, 2), (2, 3), (3, 1), (3, 2), (5, 1), (5, 2)] {
        let order = p.pow(k);
        let mut exps: Vec<i64> = Vec::new();
        enumerate_multisets(order as i64, 6, 0, &mut exps, &mut |exps| {
            let (is_zero, divisibility_ok) = phi_prime_power_check(p, k, exps);
            assert!(
                divisibility_ok,
                "vanishing sum of length {} at order {order}: {exps:?}",
                exps.len()
            );
            let _ = is_zero;
            multisets += 1;
        });
    }

    finish(
        "acceptance 5 (cyclotomic exactness)",
        format!("10000 random sums, {multisets} exhaustive multisets"),
        started,
        Duration::from_secs(60),
    );
}

fn enumerate_multisets(
    order: i64,
    max_len: usize,
    min: i64,
    current: &mut Vec<i64>,
    visit: &mut impl FnMut(&[i64]),
) {
    if !current.is_empty() {
        visit(current);
    }
    if current.len() == max_len {
        return;
    }
    for e in min..order {
        current.push(e);
        enumerate_multisets(order, max_len, e, current, visit);
        current.pop();
    }
}

// ---------------------------------------------------------------------
// Classification fixtures: clusters with hand-derived expected cases.

fn classification_fixtures() -> Vec<(Cluster, u64, &'static str)> {
    let mut out: Vec<(Cluster, u64, &'static str)> = Vec::new();

    // Two divisible support directions.
    out.push((
        Cluster::from_i64(&[&[0, 0, 0], &[1, 0, 0], &[0, 1, 0], &[1, 1, 0]]),
        2,
        "Case1",
    ));
    out.push((
        Cluster::from_i64(&[&[0, 0, 0], &[1, 0, 0], &[0, 0, 1], &[1, 0, 1]]),
        2,
        "Case1",
    ));
    out.push((
        Cluster::from_i64(&[&[0, 0, 0], &[0, 1, 0], &[0, 0, 1], &[0, 1, 1]]),
        2,
        "Case1",
    ));
    // Two dominoes glued along a skew translate.
    out.push((
        Cluster::from_i64(&[&[0, 0, 0], &[1, 0, 0], &[0, 2, 1], &[1, 2, 1]]),
        2,
        "Case1",
    ));
    // Offset dominoes in the plane.
    out.push((
        Cluster::from_i64(&[&[0, 0, 0], &[1, 0, 0], &[1, 1, 0], &[2, 1, 0]]),
        2,
        "Case1",
    ));
    // Full 3x3 square.
    out.push((
        Cluster::from_i64(&[
            &[0, 0, 0],
            &[1, 0, 0],
            &[2, 0, 0],
            &[0, 1, 0],
            &[1, 1, 0],
            &[2, 1, 0],
            &[0, 2, 0],
            &[1, 2, 0],
            &[2, 2, 0],
        ]),
        3,
        "Case1",
    ));

    // Exactly one divisible direction, no transversal zero line: the
    // support certificate branch.
    out.push((
        Cluster::from_i64(&[&[0, 0, 0], &[1, 0, 0], &[2, 0, 0], &[3, 0, 0]]),
        2,
        "Case2_2",
    ));
    out.push((
        Cluster::from_i64(&[&[0, 0, 0], &[2, 0, 0], &[4, 0, 0], &[6, 0, 0]]),
        2,
        "Case2_2",
    ));
    out.push((
        Cluster::from_i64(&[
            &[0, 0, 0],
            &[1, 0, 0],
            &[2, 0, 0],
            &[3, 0, 0],
            &[4, 0, 0],
            &[5, 0, 0],
            &[6, 0, 0],
            &[7, 0, 0],
            &[8, 0, 0],
        ]),
        3,
        "Case2_2",
    ));

    // Exactly one divisible direction with a full zero line transversal
    // to it: the constructive branch. Both are stacks of a non-collinear
    // three-point foundation.
    out.push((lstack(&[(0, 0), (1, 0), (0, 1)]), 3, "Case2_1"));
    out.push((lstack(&[(0, 0), (2, 0), (1, 1)]), 3, "Case2_1"));

    // No divisible direction.
    out.push((
        Cluster::from_i64(&[&[0, 0, 0], &[1, 0, 0], &[0, 1, 0], &[2, 2, 0]]),
        2,
        "Case3",
    ));
    out.push((
        Cluster::from_i64(&[&[0, 0, 0], &[1, 0, 0], &[0, 1, 0], &[1, 1, 1]]),
        2,
        "Case3",
    ));
    out.push((
        Cluster::from_i64(&[&[0, 0, 0], &[1, 0, 0], &[2, 0, 0], &[1, 1, 0]]),
        2,
        "Case3",
    ));
    // Layers of the three-point foundation with the middle layer shifted.
    {
        let mut pts: Vec<Vec<i64>> = Vec::new();
        for (x, y) in [(0i64, 0i64), (1, 0), (0, 1)] {
            pts.push(vec![x, y, 0]);
            pts.push(vec![x + 1, y, 1]);
            pts.push(vec![x, y, 2]);
        }
        let refs: Vec<&[i64]> = pts.iter().map(|p| p.as_slice()).collect();
        out.push((Cluster::from_i64(&refs), 3, "Case3"));
    }

    out
}

fn lstack(foundation: &[(i64, i64)]) -> Cluster {
    let mut pts: Vec<Vec<i64>> = Vec::new();
    for z in 0..3 {
        for &(x, y) in foundation {
            pts.push(vec![x, y, z]);
        }
    }
    let refs: Vec<&[i64]> = pts.iter().map(|p| p.as_slice()).collect();
    Cluster::from_i64(&refs)
}

#[test]
fn criterion_6_classification_fixtures() {
    let started = Instant::now();
    let fixtures = classification_fixtures();
    assert!(fixtures.len() >= 12);
    let mut constructive = 0usize;
    for (f, p, expected) in &fixtures {
        let c = classify(f, *p, 96).unwrap();
        assert_eq!(
            c.case.tag(),
            *expected,
            "case mismatch for cluster {:?}",
            f.points()
        );
        c.validate().unwrap();
        if matches!(c.case.tag(), "Case1" | "Case2_1") {
            let tiling = c
                .case
                .tiling()
                .expect("constructive case must embed a tiling");
            assert!(verify_tiling(f, tiling).unwrap());
            assert!(tiling.period().is_full_rank());
            constructive += 1;
        }
    }
    finish(
        "acceptance 6 (classification fixtures)",
        format!("{} fixtures, {constructive} constructive", fixtures.len()),
        started,
        Duration::from_secs(120),
    );
}

// ---------------------------------------------------------------------
// Spectral containments.

fn rational_values(max_den: i64) -> Vec<(i64, i64)> {
    let mut vals = vec![(0, 1)];
    for d in 2..=max_den {
        for n in 1..d {
            if num_integer::Integer::gcd(&n, &d) == 1 {
                vals.push((n, d));
            }
        }
    }
    vals
}

fn in_kernel(w: &RationalTorusPoint, g: &IntVec) -> bool {
    w.dot_vec(g).is_integer()
}

#[test]
fn criterion_7_spectral_containments() {
    let started = Instant::now();
    let vals8 = rational_values(8);
    let spectral_clusters: Vec<(Cluster, u64)> = vec![
        (
            Cluster::from_i64(&[&[0, 0, 0], &[1, 0, 0], &[0, 1, 0], &[1, 1, 0]]),
            2,
        ),
        (
            Cluster::from_i64(&[&[0, 0, 0], &[1, 0, 0], &[0, 0, 1], &[1, 0, 1]]),
            2,
        ),
        (
            Cluster::from_i64(&[&[0, 0, 0], &[1, 0, 0], &[0, 1, 0], &[2, 2, 0]]),
            2,
        ),
        (
            Cluster::from_i64(&[&[0, 0, 0], &[1, 0, 0], &[2, 0, 0], &[3, 0, 0]]),
            2,
        ),
        (lstack(&[(0, 0), (1, 0), (0, 1)]), 3),
    ];

    // Membership in the common zero set implies membership in the kernel
    // of some computed support direction, over the full denominator-8 grid.
    let mut members = 0usize;
    for (f, _) in &spectral_clusters {
        let delta = compute_delta(f).unwrap();
        for &(nx, dx) in &vals8 {
            for &(ny, dy) in &vals8 {
                for &(nz, dz) in &vals8 {
                    let rho = RationalTorusPoint::from_fracs(&[(nx, dx), (ny, dy), (nz, dz)]);
                    if z_membership(f, &rho).unwrap() {
                        members += 1;
                        assert!(
                            delta.vectors().iter().any(|h| in_kernel(&rho, h)),
                            "zero-set point {rho:?} outside every support kernel"
                        );
                    }
                }
            }
        }
    }

    // Kernel intersections: both containment directions.
    let vals12 = rational_values(12);
    let pairs = [
        ([1i64, 0, 0], [0i64, 1, 0]),
        ([2, 0, 0], [0, 1, 0]),
        ([1, 1, 0], [0, 0, 1]),
        ([2, 1, 0], [1, 0, 2]),
        ([3, 0, 1], [0, 2, 1]),
        ([1, 2, 3], [2, 1, 0]),
    ];
    let mut kernel_hits = 0usize;
    for (ga, ha) in pairs {
        let g = IntVec::from_i64(&ga);
        let h = IntVec::from_i64(&ha);
        let family = kernel_intersection_lines(&g, &h).unwrap();
        let v = &family.directions[0];

        for &(nx, dx) in &vals12 {
            for &(ny, dy) in &vals12 {
                for &(nz, dz) in &vals12 {
                    let w = RationalTorusPoint::from_fracs(&[(nx, dx), (ny, dy), (nz, dz)]);
                    if in_kernel(&w, &g) && in_kernel(&w, &h) {
                        kernel_hits += 1;
                        assert!(
                            family.contains_point(&w).unwrap(),
                            "kernel point {w:?} off every line for {ga:?}/{ha:?}"
                        );
                    }
                }
            }
        }
        // Twenty parameter samples per emitted line stay inside both kernels.
        for rho in &family.points {
            for k in 0..20i64 {
                let t = num_rational::BigRational::new(BigInt::from(k), BigInt::from(12));
                let w = rho.offset_along(v, &t);
                assert!(in_kernel(&w, &g) && in_kernel(&w, &h));
            }
        }
    }

    // Full zero lines: pointwise membership along the line, and the
    // forced plane divisibility.
    let zero_lines: Vec<(Cluster, u64, RationalTorusPoint, IntVec)> = vec![
        (
            Cluster::from_i64(&[&[0, 0, 0], &[1, 0, 0], &[0, 1, 0], &[1, 1, 0]]),
            2,
            RationalTorusPoint::from_fracs(&[(1, 2), (1, 2), (0, 1)]),
            IntVec::from_i64(&[0, 0, 1]),
        ),
        (
            Cluster::from_i64(&[&[0, 0, 0], &[1, 0, 0], &[0, 0, 1], &[1, 0, 1]]),
            2,
            RationalTorusPoint::from_fracs(&[(1, 2), (0, 1), (0, 1)]),
            IntVec::from_i64(&[0, 1, 0]),
        ),
        (
            lstack(&[(0, 0), (1, 0), (0, 1)]),
            3,
            RationalTorusPoint::from_fracs(&[(1, 3), (2, 3), (0, 1)]),
            IntVec::from_i64(&[0, 0, 1]),
        ),
    ];
    for (f, p, rho, v) in &zero_lines {
        assert!(line_in_z(f, rho, v).unwrap());
        for k in 0..20i64 {
            let t = num_rational::BigRational::new(BigInt::from(k), BigInt::from(7));
            let w = rho.offset_along(v, &t);
            assert!(
                z_membership(f, &w).unwrap(),
                "line point {w:?} not in the zero set"
            );
        }
        assert!(
            precursor_conclusion_check(f, *p, rho, v).unwrap(),
            "zero line failed to force plane divisibility"
        );
    }

    // Dichotomy line branch: zero-set points in the kernel of the tested
    // direction lie on an emitted line.
    let mut dichotomy_hits = 0usize;
    for (f, p) in &spectral_clusters {
        let delta = compute_delta(f).unwrap();
        for h in delta.vectors() {
            let SupportDichotomy::Lines(family) = support_dichotomy(f, *p, h).unwrap() else {
                continue;
            };
            for &(nx, dx) in &vals8 {
                for &(ny, dy) in &vals8 {
                    for &(nz, dz) in &vals8 {
                        let w = RationalTorusPoint::from_fracs(&[(nx, dx), (ny, dy), (nz, dz)]);
                        if in_kernel(&w, h) && z_membership(f, &w).unwrap() {
                            dichotomy_hits += 1;
                            assert!(
                                family.contains_point(&w).unwrap(),
                                "kernel zero {w:?} off the emitted lines"
                            );
                        }
                    }
                }
            }
        }
    }

    finish(
        "acceptance 7 (spectral containments)",
        format!("{members} zero-set points, {kernel_hits} kernel points, {dichotomy_hits} dichotomy points"),
        started,
        Duration::from_secs(180),
    );
}

#[test]
fn criterion_8_polynomial_sequences() {
    let started = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(0x9035_7e11);
    let mut runs = 0usize;
    for seed in 0..100 {
        let _ = seed;
        for m in 1..=4u64 {
            for k in 1..=3u32 {
                let initial: Vec<num_rational::BigRational> = (0..(m * k as u64))
                    .map(|_| {
                        let den = rng.gen_range(1..=12i64);
                        let num = rng.gen_range(0..den.max(1));
                        num_rational::BigRational::new(BigInt::from(num), BigInt::from(den))
                    })
                    .collect();
                let s = solve_unipotent(m, k, &initial).unwrap();
                let annihilator = LaurentOperator::unipotent(m).pow(k);
                assert!(is_annihilated(&s, &annihilator));
                for (i, want) in initial.iter().enumerate() {
                    assert_eq!(s.eval(i as i64), latile_core::spectral::frac(want));
                }
                // Weyl period of the first piece: verified and minimal.
                let piece = s.pieces()[0].clone();
                let WeylClass::Periodic(n) = classify_weyl(&piece) else {
                    panic!("rational pieces are periodic");
                };
                let seq_at = |j: i64| {
                    s.eval(j * m as i64) // coset 0 of the modulus
                };
                for j in 0..2 * n as i64 {
                    assert_eq!(seq_at(j), seq_at(j + n as i64));
                }
                for d in 1..n {
                    if n % d == 0 {
                        let all = (0..2 * n as i64).all(|j| seq_at(j) == seq_at(j + d as i64));
                        assert!(!all, "period {n} not minimal; {d} already works");
                    }
                }
                runs += 1;
            }
        }
    }
    finish(
        "acceptance 8 (polynomial sequences)",
        format!("{runs} solve/annihilate/period runs"),
        started,
        Duration::from_secs(10),
    );
}
