use std::collections::{HashMap, HashSet};

use dlconn_core::coxeter::{CoxeterGroup, GeneratorSet};
use dlconn_core::field::{Fe, FieldTower};
use dlconn_core::flag::{Flag, FlagError, GroupRealization, RelPos};

fn realization(spec: &str, levels: &[u32]) -> GroupRealization {
    GroupRealization::parse(spec, levels).unwrap()
}

fn permutations(n: usize) -> Vec<RelPos> {
    let mut out = vec![vec![]];
    for k in 0..n {
        out = out
            .into_iter()
            .flat_map(|p: Vec<usize>| {
                (0..=k).map(move |pos| {
                    let mut q = p.clone();
                    q.insert(pos, k);
                    q
                })
            })
            .collect();
    }
    out.into_iter().map(|p| RelPos::new(p).unwrap()).collect()
}

/// Rank of a list of vectors by plain Gaussian elimination.
fn rank(t: &FieldTower, mut rows: Vec<Vec<Fe>>) -> usize {
    let n = rows.first().map_or(0, Vec::len);
    let mut r = 0;
    for col in 0..n {
        let Some(piv) = (r..rows.len()).find(|&i| !rows[i][col].is_zero()) else { continue };
        rows.swap(r, piv);
        let inv = t.inv(rows[r][col]).unwrap();
        for i in 0..rows.len() {
            if i != r && !rows[i][col].is_zero() {
                let c = t.mul(rows[i][col], inv);
                let pivot = rows[r].clone();
                for (x, &y) in rows[i].iter_mut().zip(&pivot) {
                    *x = t.sub(*x, t.mul(c, y));
                }
            }
        }
        r += 1;
    }
    r
}

/// Relative position from intersection dimensions `dim(a_i ∩ b_j)`.
fn relpos_by_dimensions(t: &FieldTower, a: &Flag, b: &Flag) -> Vec<usize> {
    let n = a.dim();
    let d = |i: usize, j: usize| {
        let rows: Vec<Vec<Fe>> = (0..i).map(|k| a.row(k).to_vec()).chain((0..j).map(|k| b.row(k).to_vec())).collect();
        i + j - if rows.is_empty() { 0 } else { rank(t, rows) }
    };
    let dims: Vec<Vec<usize>> = (0..=n).map(|i| (0..=n).map(|j| d(i, j)).collect()).collect();
    (0..n)
        .map(|j| {
            let hits: Vec<usize> = (0..n)
                .filter(|&i| dims[i + 1][j + 1] + dims[i][j] == dims[i][j + 1] + dims[i + 1][j] + 1)
                .collect();
            assert_eq!(hits.len(), 1, "dimension matrix must determine a permutation");
            hits[0]
        })
        .collect()
}

#[test]
fn bruhat_order_is_rank_dominance() {
    for n in 2..=4 {
        let g = CoxeterGroup::from_label(&format!("A{}", n - 1)).unwrap();
        let perms = permutations(n);
        for v in &perms {
            let rv = v.rank_matrix();
            let ev = v.to_element(&g).unwrap();
            assert_eq!(ev.length(), v.inversions());
            for w in &perms {
                let rw = w.rank_matrix();
                let dominates = rv.iter().flatten().zip(rw.iter().flatten()).all(|(a, b)| a >= b);
                assert_eq!(ev.bruhat_leq(&w.to_element(&g).unwrap()).unwrap(), dominates, "{v} <= {w}");
            }
        }
    }
}

#[test]
fn relpos_matches_intersection_dimensions() {
    for (spec, m) in [("GL2@q=2", 2), ("GL3@q=2", 1), ("GL3@q=3", 1), ("U3@q=2", 1)] {
        let r = realization(spec, &[m]);
        let flags = r.enumerate_flags(m).unwrap();
        for a in &flags {
            for b in &flags {
                let w = r.relpos(a, b).unwrap();
                assert_eq!(w.perm(), relpos_by_dimensions(r.tower(), a, b).as_slice(), "{spec}");
                assert_eq!(r.relpos(b, a).unwrap(), w.inverse());
            }
        }
    }
}

#[test]
fn relpos_examples() {
    let r = realization("GL3@q=2", &[1]);
    let base = r.base_flag();
    assert_eq!(r.relpos(&base, &base).unwrap(), RelPos::identity(3));
    let reversed = r.permuted_base_flag(&RelPos::longest(3));
    assert_eq!(r.relpos(&base, &reversed).unwrap(), RelPos::longest(3));
    // Same plane, different line.
    let (o, z) = (Fe::ONE, Fe::ZERO);
    let other = r.canonicalize(&[z, o, z, o, z, z, z, z, o]).unwrap();
    assert_eq!(r.relpos(&base, &other).unwrap().perm(), &[1, 0, 2]);
    for w in permutations(3) {
        assert_eq!(r.relpos(&base, &r.permuted_base_flag(&w)).unwrap(), w);
    }
    let big = realization("GL4@q=2", &[1]);
    assert!(matches!(r.relpos(&base, &big.base_flag()), Err(FlagError::RealizationMismatch)));
}

#[test]
fn canonical_form_is_unique() {
    let r = realization("GL3@q=3", &[1]);
    let t = r.tower();
    let flags = r.enumerate_flags(1).unwrap();
    let set: HashSet<&Flag> = flags.iter().collect();
    assert_eq!(set.len(), flags.len());
    assert_eq!(flags.len() as u64, GroupRealization::flag_count(3, 3));
    // Row operations preserving each F_i leave the canonical form alone.
    for f in flags.iter().step_by(11) {
        let mut basis: Vec<Fe> = Vec::new();
        for i in 0..3 {
            let mut v = f.row(i).to_vec();
            for k in 0..i {
                let c = t.from_int((i + k + 1) as u64);
                for (x, &y) in v.iter_mut().zip(f.row(k)) {
                    *x = t.add(*x, t.mul(c, y));
                }
            }
            let scale = t.from_int(2);
            basis.extend(v.into_iter().map(|x| t.mul(scale, x)));
        }
        assert_eq!(&r.canonicalize(&basis).unwrap(), f);
    }
}

#[test]
fn rational_cell_sizes() {
    for spec in ["GL2@q=3", "GL3@q=2", "GL3@q=3", "GL4@q=2", "U3@q=2", "U4@q=2"] {
        let r = realization(spec, &[1]);
        let base = r.base_flag();
        let q = r.q();
        let mut sizes: HashMap<RelPos, u64> = HashMap::new();
        for f in r.rational_flags().unwrap() {
            *sizes.entry(r.schubert_cell_of(&base, &f).unwrap()).or_default() += 1;
        }
        for v in permutations(r.n()) {
            let fixed = r.sigma_relpos(&v) == v;
            let expected = if fixed { q.pow(v.inversions() as u32) } else { 0 };
            assert_eq!(sizes.get(&v).copied().unwrap_or(0), expected, "{spec} {v}");
        }
    }
    let r = realization("GL3@q=2", &[1]);
    let s1 = RelPos::new(vec![1, 0, 2]).unwrap();
    let cell: Vec<Flag> = r
        .rational_flags()
        .unwrap()
        .into_iter()
        .filter(|f| r.schubert_cell_of(&r.base_flag(), f).unwrap() == s1)
        .collect();
    assert_eq!(cell.len(), 2);
}

#[test]
fn dl_sets_partition_the_flags() {
    for (spec, m) in [("GL2@q=2", 2), ("GL3@q=2", 2), ("U3@q=2", 1), ("U2@q=3", 2)] {
        let r = realization(spec, &[m]);
        let total = r.enumerate_flags(m).unwrap().len();
        let part = r.dl_partition(m).unwrap();
        assert_eq!(part.values().map(Vec::len).sum::<usize>(), total);
        for (w, pts) in &part {
            assert_eq!(&r.dl_points(w, m).unwrap(), pts, "{spec} {w}");
        }
        let id = RelPos::identity(r.n());
        assert_eq!(part[&id].len(), r.rational_flags().unwrap().len());
        // X(w) is empty unless w is the relative position of some Frobenius pair.
        for w in permutations(r.n()) {
            assert_eq!(part.contains_key(&w), !r.dl_points(&w, m).unwrap().is_empty());
        }
    }
}

#[test]
fn frobenius_equivariance_of_relpos() {
    for (spec, m) in [("GL3@q=2", 2), ("U3@q=2", 1)] {
        let r = realization(spec, &[m]);
        let flags = r.enumerate_flags(m).unwrap();
        for a in flags.iter().step_by(5) {
            let pa = r.frobenius_flag(a);
            for b in flags.iter().step_by(3) {
                let pb = r.frobenius_flag(b);
                assert_eq!(r.relpos(&pa, &pb).unwrap(), r.sigma_relpos(&r.relpos(a, b).unwrap()));
            }
        }
    }
}

#[test]
fn x_s1_projects_onto_rational_planes() {
    let r = realization("GL3@q=2", &[2]);
    let s1 = RelPos::new(vec![1, 0, 2]).unwrap();
    let pts = r.dl_points(&s1, 2).unwrap();
    assert!(!pts.is_empty());
    let j: GeneratorSet = [0].into_iter().collect();
    let images: HashSet<_> = pts.iter().map(|f| r.project_partial(f, j)).collect();
    assert_eq!(images.len(), 7);
    for pf in &images {
        assert_eq!(pf.dims(), &[2]);
        assert_eq!(&r.frobenius_partial(pf).unwrap(), pf);
    }
}

#[test]
fn projections() {
    let r = realization("U4@q=2", &[1]);
    let f = r.permuted_base_flag(&RelPos::new(vec![2, 0, 3, 1]).unwrap());
    assert_eq!(r.project_partial(&f, GeneratorSet::empty()).dims(), &[1, 2, 3]);
    let j: GeneratorSet = [0, 2].into_iter().collect();
    let pf = r.project_partial(&f, j);
    assert_eq!(pf.dims(), &[2]);
    assert_eq!(pf.space(0).len(), 2);
    let bad: GeneratorSet = [0].into_iter().collect();
    assert!(matches!(r.frobenius_partial(&r.project_partial(&f, bad)), Err(FlagError::NotStable(_))));
}

#[test]
fn enumeration_bound() {
    let r = realization("GL4@q=2", &[2]).with_flag_bound(1000);
    assert!(matches!(r.enumerate_flags(2), Err(FlagError::BoundExceeded { .. })));
    assert_eq!(GroupRealization::flag_count(4, 4), 5 * 21 * 85);
}

#[test]
fn flag_json_is_coefficient_matrix() {
    let r = realization("GL2@q=2", &[2]);
    let flags = r.enumerate_flags(2).unwrap();
    assert_eq!(flags.len(), 5);
    for f in &flags {
        let v = r.flag_to_json(f);
        let rows = v.as_array().unwrap();
        assert_eq!(rows.len(), 2);
        for (i, row) in rows.iter().enumerate() {
            let coeffs: Vec<Vec<u32>> = serde_json::from_value(row.clone()).unwrap();
            let entries: Vec<Fe> = coeffs.iter().map(|c| r.tower().from_coefficients(c).unwrap()).collect();
            assert_eq!(entries.as_slice(), f.row(i));
        }
    }
    let base = r.flag_to_json(&r.base_flag());
    assert_eq!(base, serde_json::json!([[[1, 0], [0, 0]], [[0, 0], [1, 0]]]));
}
