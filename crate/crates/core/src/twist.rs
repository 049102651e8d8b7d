//! Diagram automorphisms, sigma-stable closures, the connectedness and
//! irreducibility criteria, and the Coxeter structure of the fixed group.

use std::collections::{HashMap, VecDeque};
use std::time::Instant;

use serde_json::json;
use thiserror::Error;

use crate::coxeter::{CoxeterDatum, CoxeterError, CoxeterGroup, GeneratorSet, WeylElement};
use crate::report::{Verdict, VerificationReport};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TwistError {
    #[error(transparent)]
    Coxeter(#[from] CoxeterError),
    #[error("invalid diagram automorphism: {0}")]
    InvalidAutomorphism(String),
    #[error("element {0} is not fixed by sigma")]
    NotSigmaFixed(String),
    #[error("generator set {0} is not sigma-stable")]
    NotSigmaStable(String),
    #[error("the sigma-closure of {0} is not all of S")]
    CriterionFails(String),
    #[error("descent equivalence violated for v = {element}, s = {generator}")]
    EquivalenceViolated { element: String, generator: usize },
}

/// A permutation of the simple reflections preserving the Coxeter matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DiagramAutomorphism {
    perm: Vec<usize>,
    order: usize,
}

impl DiagramAutomorphism {
    pub fn identity(rank: usize) -> Self {
        Self { perm: (0..rank).collect(), order: 1 }
    }

    pub fn new(datum: &CoxeterDatum, perm: Vec<usize>) -> Result<Self, TwistError> {
        let rank = datum.rank();
        if perm.len() != rank {
            return Err(TwistError::InvalidAutomorphism(format!(
                "permutation has {} entries for rank {rank}",
                perm.len()
            )));
        }
        let mut hit = vec![false; rank];
        for &t in &perm {
            if t >= rank || std::mem::replace(&mut hit[t], true) {
                return Err(TwistError::InvalidAutomorphism(format!("{perm:?} is not a permutation")));
            }
        }
        for s in 0..rank {
            for t in 0..rank {
                if datum.m(perm[s], perm[t]) != datum.m(s, t) {
                    return Err(TwistError::InvalidAutomorphism(format!(
                        "m({s},{t}) = {} but m({},{}) = {}",
                        datum.m(s, t),
                        perm[s],
                        perm[t],
                        datum.m(perm[s], perm[t])
                    )));
                }
            }
        }
        let mut order = 1;
        let mut power = perm.clone();
        while power.iter().enumerate().any(|(i, &p)| i != p) {
            power = power.iter().map(|&p| perm[p]).collect();
            order += 1;
        }
        Ok(Self { perm, order })
    }

    /// Parses `"1"`, an explicit map such as `"0>2,2>0"` (unlisted indices
    /// are fixed), or one of the labels `2A<n>`, `2D<n>`, `3D4`.
    pub fn parse(datum: &CoxeterDatum, text: &str) -> Result<Self, TwistError> {
        let rank = datum.rank();
        let text = text.trim();
        let bad = |msg: String| TwistError::InvalidAutomorphism(msg);
        if text == "1" || text.is_empty() || text == "id" {
            return Ok(Self::identity(rank));
        }
        let mut perm: Vec<usize> = (0..rank).collect();
        if text.contains('>') {
            for pair in text.split(',') {
                let (a, b) = pair
                    .split_once('>')
                    .ok_or_else(|| bad(format!("bad twist entry `{pair}`")))?;
                let a: usize = a.trim().parse().map_err(|_| bad(format!("bad twist entry `{pair}`")))?;
                let b: usize = b.trim().parse().map_err(|_| bad(format!("bad twist entry `{pair}`")))?;
                if a >= rank || b >= rank {
                    return Err(bad(format!("index out of range in `{pair}`")));
                }
                perm[a] = b;
            }
            return Self::new(datum, perm);
        }
        let label = text.to_ascii_uppercase();
        let (kind, rest) = label.split_at(1.min(label.len()));
        let letter = rest.chars().next();
        let n: usize = rest.get(1..).and_then(|r| r.parse().ok()).ok_or_else(|| bad(format!("unknown twist `{text}`")))?;
        if n != rank {
            return Err(bad(format!("twist `{text}` does not match rank {rank}")));
        }
        match (kind, letter) {
            ("2", Some('A')) => perm = (0..rank).rev().collect(),
            ("2", Some('D')) if rank >= 4 => perm.swap(rank - 2, rank - 1),
            ("3", Some('D')) if rank == 4 => perm = vec![2, 1, 3, 0],
            _ => return Err(bad(format!("unknown twist `{text}`"))),
        }
        Self::new(datum, perm)
    }

    pub fn apply(&self, s: usize) -> usize {
        self.perm[s]
    }

    pub fn perm(&self) -> &[usize] {
        &self.perm
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn is_identity(&self) -> bool {
        self.order == 1
    }
}

/// A finite Coxeter group together with a diagram automorphism.
#[derive(Debug, Clone)]
pub struct TwistedDatum {
    group: CoxeterGroup,
    sigma: DiagramAutomorphism,
    /// Root permutation of sigma, and its inverse.
    root_sigma: Vec<u32>,
    root_sigma_inv: Vec<u32>,
}

impl TwistedDatum {
    pub fn new(group: CoxeterGroup, sigma: DiagramAutomorphism) -> Result<Self, TwistError> {
        if sigma.perm.len() != group.rank() {
            return Err(TwistError::InvalidAutomorphism("rank mismatch".into()));
        }
        let root_sigma = group.root_permutation(&sigma.perm);
        let mut root_sigma_inv = vec![0u32; root_sigma.len()];
        for (k, &r) in root_sigma.iter().enumerate() {
            root_sigma_inv[r as usize] = k as u32;
        }
        Ok(Self { group, sigma, root_sigma, root_sigma_inv })
    }

    pub fn untwisted(group: CoxeterGroup) -> Self {
        let rank = group.rank();
        Self::new(group, DiagramAutomorphism::identity(rank)).expect("identity is valid")
    }

    /// Parses a group datum and a twist in their text formats.
    pub fn parse(group: &str, twist: &str) -> Result<Self, TwistError> {
        let datum = CoxeterDatum::parse(group)?;
        let sigma = DiagramAutomorphism::parse(&datum, twist)?;
        Self::new(CoxeterGroup::new(datum)?, sigma)
    }

    pub fn group(&self) -> &CoxeterGroup {
        &self.group
    }

    pub fn sigma(&self) -> &DiagramAutomorphism {
        &self.sigma
    }

    pub fn rank(&self) -> usize {
        self.group.rank()
    }

    pub fn all_generators(&self) -> GeneratorSet {
        self.group.all_generators()
    }

    /// Image of `w` under the automorphism induced by sigma.
    pub fn apply_sigma(&self, w: &WeylElement) -> WeylElement {
        // As root permutations sigma(w) = tau w tau^{-1}.
        let perm = w.root_perm();
        let image: Vec<u32> = (0..perm.len())
            .map(|k| self.root_sigma[perm[self.root_sigma_inv[k] as usize] as usize])
            .collect();
        self.group.element_from_root_permutation(image)
    }

    pub fn is_sigma_fixed(&self, w: &WeylElement) -> bool {
        self.apply_sigma(w) == *w
    }

    pub fn sigma_orbit(&self, s: usize) -> GeneratorSet {
        let mut orbit = GeneratorSet::singleton(s);
        let mut t = self.sigma.apply(s);
        while t != s {
            orbit.insert(t);
            t = self.sigma.apply(t);
        }
        orbit
    }

    /// The smallest sigma-stable subset of S containing `set`.
    pub fn sigma_closure(&self, set: GeneratorSet) -> GeneratorSet {
        set.iter().fold(GeneratorSet::empty(), |acc, s| acc.union(self.sigma_orbit(s)))
    }

    pub fn is_sigma_stable(&self, set: GeneratorSet) -> bool {
        self.sigma_closure(set) == set
    }

    /// Whether `X(id) ∪ ⋃_{s ∈ I} X(s)` is connected: `I` lies in no proper
    /// sigma-stable subset of S.
    pub fn is_connected_union(&self, set: GeneratorSet) -> bool {
        self.sigma_closure(set) == self.all_generators()
    }

    /// Whether `X(w)` is irreducible: `w` lies in no proper sigma-stable
    /// standard parabolic subgroup.
    pub fn is_irreducible(&self, w: &WeylElement) -> bool {
        self.is_connected_union(w.support())
    }

    /// The generators of the parabolic `W^w`: sigma-closure of the support.
    pub fn stable_support(&self, w: &WeylElement) -> GeneratorSet {
        self.sigma_closure(w.support())
    }

    /// Distinct sigma-orbits on S, each listed once, ordered by smallest member.
    pub fn orbits(&self) -> Vec<GeneratorSet> {
        let mut out: Vec<GeneratorSet> = Vec::new();
        for s in 0..self.rank() {
            let o = self.sigma_orbit(s);
            if !out.contains(&o) {
                out.push(o);
            }
        }
        out
    }

    /// `w_0^s`, the longest element of the parabolic on the orbit of `s`.
    pub fn orbit_longest(&self, s: usize) -> WeylElement {
        self.group.longest_element(self.sigma_orbit(s))
    }

    pub fn fixed_subgroup(&self, bound: usize) -> Result<FixedGroupStructure, TwistError> {
        let elements: Vec<WeylElement> = self
            .group
            .enumerate(bound)?
            .into_iter()
            .filter(|w| self.is_sigma_fixed(w))
            .collect();
        let orbits = self.orbits();
        let generators: Vec<WeylElement> = orbits.iter().map(|&o| self.group.longest_element(o)).collect();
        let k = generators.len();
        let mut coxeter_matrix = vec![vec![1u32; k]; k];
        for i in 0..k {
            for j in 0..k {
                if i != j {
                    coxeter_matrix[i][j] = (&generators[i] * &generators[j]).order() as u32;
                }
            }
        }
        Ok(FixedGroupStructure { elements, orbits, generators, coxeter_matrix })
    }

    /// Smallest `s ∈ I` with `vs < v`, for `v ∈ W^sigma`.
    ///
    /// Returns `None` for `v = id`, and also when no generator of `I` is a
    /// descent, which can only happen if the sigma-closure of `I` is proper.
    /// Along the way checks that `vs < v` iff `v sigma(s) < v` for all `s`.
    pub fn descent_move_exists(&self, set: GeneratorSet, v: &WeylElement) -> Result<Option<usize>, TwistError> {
        if !self.is_sigma_fixed(v) {
            return Err(TwistError::NotSigmaFixed(v.to_word_string()));
        }
        for s in 0..self.rank() {
            if v.has_right_descent(s) != v.has_right_descent(self.sigma.apply(s)) {
                return Err(TwistError::EquivalenceViolated { element: v.to_word_string(), generator: s });
            }
        }
        if v.is_identity() {
            return Ok(None);
        }
        Ok(set.iter().find(|&s| v.has_right_descent(s)))
    }

    /// Checks that `W^sigma` with the generators `w_0^s` is a Coxeter system
    /// whose Bruhat order is the restriction of the order on `W`.
    pub fn verify_steinberg(&self, bound: usize) -> Result<VerificationReport, TwistError> {
        let start = Instant::now();
        let fixed = self.fixed_subgroup(bound)?;
        let mut witnesses = Vec::new();

        let index: HashMap<&WeylElement, usize> = fixed.elements.iter().enumerate().map(|(i, w)| (w, i)).collect();
        let generated = fixed.intrinsic_lengths(&index);
        let generation_ok = match &generated {
            Some(_) => true,
            None => {
                witnesses.push("generators w_0^s do not generate the fixed subgroup".to_string());
                false
            }
        };
        let abstract_datum = CoxeterDatum::new(fixed.coxeter_matrix.clone())?;
        let abstract_order = CoxeterGroup::new(abstract_datum)?.enumerate(bound)?.len();
        let order_ok = abstract_order == fixed.elements.len();
        if !order_ok {
            witnesses.push(format!(
                "abstract Coxeter group has order {abstract_order}, fixed subgroup has {}",
                fixed.elements.len()
            ));
        }
        let mut bruhat_ok = generation_ok;
        let mut pairs_checked = 0usize;
        if let Some(lengths) = &generated {
            let leq = fixed.intrinsic_bruhat(&index, lengths);
            let n = fixed.elements.len();
            'outer: for x in 0..n {
                for y in 0..n {
                    pairs_checked += 1;
                    let ambient = fixed.elements[x].bruhat_leq(&fixed.elements[y])?;
                    if ambient != leq[x][y] {
                        bruhat_ok = false;
                        witnesses.push(format!(
                            "x = {}, y = {}: ambient {ambient}, intrinsic {}",
                            fixed.elements[x], fixed.elements[y], leq[x][y]
                        ));
                        break 'outer;
                    }
                }
            }
        }
        let verdict = if generation_ok && order_ok && bruhat_ok { Verdict::Pass } else { Verdict::Fail };
        let mut report = VerificationReport::new(
            "steinberg",
            "W^sigma with the generators w_0^s is a Coxeter system, and its Bruhat order is the restriction of the Bruhat order of W",
        );
        report.param("group", json!(self.group.datum().to_string()));
        report.param("twist", json!(self.sigma.perm));
        report.param("fixed_order", json!(fixed.elements.len()));
        report.param("fixed_coxeter_matrix", json!(fixed.coxeter_matrix));
        report.param(
            "generators",
            json!(fixed.generators.iter().map(|g| g.to_word_string()).collect::<Vec<_>>()),
        );
        report.param(
            "subchecks",
            json!({"generation": generation_ok, "order": order_ok, "bruhat_restriction": bruhat_ok}),
        );
        report.param("pairs_compared", json!(pairs_checked));
        if witnesses.is_empty() {
            witnesses.push(format!("|W^sigma| = {} = order of the abstract Coxeter group", fixed.elements.len()));
        }
        Ok(report.finish(verdict, witnesses, start))
    }
}

/// `W^sigma` with its distinguished generators `w_0^s`, one per sigma-orbit.
#[derive(Debug, Clone)]
pub struct FixedGroupStructure {
    pub elements: Vec<WeylElement>,
    pub orbits: Vec<GeneratorSet>,
    pub generators: Vec<WeylElement>,
    /// Orders of pairwise products of `generators`.
    pub coxeter_matrix: Vec<Vec<u32>>,
}

impl FixedGroupStructure {
    /// Word length in the generators `w_0^s`, by BFS from the identity.
    /// `None` if the generators do not reach every fixed element.
    fn intrinsic_lengths(&self, index: &HashMap<&WeylElement, usize>) -> Option<Vec<usize>> {
        let n = self.elements.len();
        let mut dist = vec![usize::MAX; n];
        let id = index.iter().find(|(w, _)| w.is_identity()).map(|(_, &i)| i)?;
        dist[id] = 0;
        let mut queue = VecDeque::from([id]);
        while let Some(x) = queue.pop_front() {
            for g in &self.generators {
                let y = *index.get(&(&self.elements[x] * g))?;
                if dist[y] == usize::MAX {
                    dist[y] = dist[x] + 1;
                    queue.push_back(y);
                }
            }
        }
        dist.iter().all(|&d| d != usize::MAX).then_some(dist)
    }

    /// Bruhat order of the abstract Coxeter system, by the lifting
    /// recursion on intrinsic length.
    fn intrinsic_bruhat(&self, index: &HashMap<&WeylElement, usize>, lengths: &[usize]) -> Vec<Vec<bool>> {
        let n = self.elements.len();
        let mul: Vec<Vec<usize>> = (0..n)
            .map(|x| self.generators.iter().map(|g| index[&(&self.elements[x] * g)]).collect())
            .collect();
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by_key(|&y| lengths[y]);
        let mut leq = vec![vec![false; n]; n];
        for &y in &order {
            if lengths[y] == 0 {
                leq[y][y] = true;
                continue;
            }
            let g = (0..self.generators.len()).find(|&g| lengths[mul[y][g]] < lengths[y]).expect("descent");
            let yg = mul[y][g];
            for x in 0..n {
                let xg = mul[x][g];
                leq[x][y] = if lengths[xg] < lengths[x] { leq[xg][yg] } else { leq[x][yg] };
            }
        }
        leq
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coxeter::DEFAULT_GROUP_BOUND;

    fn twisted(group: &str, twist: &str) -> TwistedDatum {
        TwistedDatum::parse(group, twist).unwrap()
    }

    fn set(members: &[usize]) -> GeneratorSet {
        members.iter().copied().collect()
    }

    #[test]
    fn automorphism_validation() {
        let a3 = CoxeterDatum::parse("A3").unwrap();
        assert!(DiagramAutomorphism::new(&a3, vec![1, 0, 2]).is_err());
        assert!(DiagramAutomorphism::new(&a3, vec![0, 0, 2]).is_err());
        let flip = DiagramAutomorphism::parse(&a3, "0>2,2>0").unwrap();
        assert_eq!(flip.perm(), &[2, 1, 0]);
        assert_eq!(flip.order(), 2);
        assert_eq!(DiagramAutomorphism::parse(&a3, "2A3").unwrap(), flip);
        let d4 = CoxeterDatum::parse("D4").unwrap();
        assert_eq!(DiagramAutomorphism::parse(&d4, "3D4").unwrap().order(), 3);
        assert_eq!(DiagramAutomorphism::parse(&d4, "2D4").unwrap().perm(), &[0, 1, 3, 2]);
        assert!(DiagramAutomorphism::parse(&a3, "2D4").is_err());
        assert!(DiagramAutomorphism::parse(&a3, "0>1,1>0").is_err());
    }

    #[test]
    fn apply_sigma_examples() {
        let t = twisted("A2", "2A2");
        let g = t.group().clone();
        assert!(t.apply_sigma(&g.identity()).is_identity());
        assert_eq!(t.apply_sigma(&g.generator(0)), g.generator(1));
        let t3 = twisted("A3", "2A3");
        let g3 = t3.group().clone();
        let w = g3.from_word(&[0, 1]).unwrap();
        assert_eq!(t3.apply_sigma(&w), g3.from_word(&[2, 1]).unwrap());
    }

    #[test]
    fn orbits_and_closures() {
        let split = twisted("A3", "1");
        assert_eq!(split.sigma_orbit(0), set(&[0]));
        let t = twisted("A3", "2A3");
        assert_eq!(t.sigma_orbit(0), set(&[0, 2]));
        assert_eq!(t.sigma_orbit(1), set(&[1]));
        assert_eq!(t.sigma_closure(GeneratorSet::empty()), GeneratorSet::empty());
        assert_eq!(t.sigma_closure(set(&[0])), set(&[0, 2]));
        assert_eq!(t.sigma_closure(set(&[0, 1])), set(&[0, 1, 2]));
        let tri = twisted("D4", "3D4");
        assert_eq!(tri.sigma_orbit(0), set(&[0, 2, 3]));
    }

    #[test]
    fn connectedness_criterion_examples() {
        let a2 = twisted("A2", "1");
        assert!(a2.is_connected_union(set(&[0, 1])));
        assert!(!a2.is_connected_union(set(&[0])));
        let t = twisted("A3", "2A3");
        assert!(!t.is_connected_union(set(&[1])));
        assert!(t.is_connected_union(set(&[0, 1])));
    }

    #[test]
    fn irreducibility_examples() {
        let a2 = twisted("A2", "1");
        let g = a2.group().clone();
        assert!(a2.is_irreducible(&g.from_word(&[0, 1]).unwrap()));
        assert!(!a2.is_irreducible(&g.identity()));
        let t = twisted("A3", "2A3");
        assert!(!t.is_irreducible(&t.group().generator(0)));
    }

    #[test]
    fn fixed_subgroups() {
        let a2 = twisted("A2", "1").fixed_subgroup(DEFAULT_GROUP_BOUND).unwrap();
        assert_eq!(a2.elements.len(), 6);
        assert_eq!(a2.generators.len(), 2);

        let t2 = twisted("A2", "2A2").fixed_subgroup(DEFAULT_GROUP_BOUND).unwrap();
        let words: Vec<String> = t2.elements.iter().map(|w| w.to_word_string()).collect();
        assert_eq!(words, vec!["", "0.1.0"]);
        assert_eq!(t2.generators.len(), 1);
        assert_eq!(t2.generators[0].length(), 3);

        let t3 = twisted("A3", "2A3").fixed_subgroup(DEFAULT_GROUP_BOUND).unwrap();
        assert_eq!(t3.elements.len(), 8);
        let gens: Vec<String> = t3.generators.iter().map(|w| w.to_word_string()).collect();
        assert_eq!(gens, vec!["0.2", "1"]);
        assert_eq!(t3.coxeter_matrix, vec![vec![1, 4], vec![4, 1]]);
    }

    #[test]
    fn steinberg_small_cases() {
        for (g, tw) in [("A2", "1"), ("A2", "2A2"), ("A3", "2A3"), ("B2", "1")] {
            let report = twisted(g, tw).verify_steinberg(DEFAULT_GROUP_BOUND).unwrap();
            assert_eq!(report.verdict, Verdict::Pass, "{g} {tw}: {:?}", report.witnesses);
        }
    }

    #[test]
    fn descent_moves() {
        let a2 = twisted("A2", "1");
        let g = a2.group().clone();
        assert_eq!(a2.descent_move_exists(set(&[0, 1]), &g.identity()).unwrap(), None);
        let w0 = g.from_word(&[0, 1, 0]).unwrap();
        assert_eq!(a2.descent_move_exists(set(&[0, 1]), &w0).unwrap(), Some(0));

        let t = twisted("A3", "2A3");
        let w0 = t.group().longest_element(t.all_generators());
        assert_eq!(t.descent_move_exists(set(&[0, 1]), &w0).unwrap(), Some(0));
        let s0 = t.group().generator(0);
        assert!(matches!(t.descent_move_exists(set(&[0, 1]), &s0), Err(TwistError::NotSigmaFixed(_))));
    }
}
