//! Executable certification of colimits: a candidate together with its legs
//! is checked against finitely many test cones. For each cone the mediating
//! map must exist and be unique, solved exactly as a degreewise linear
//! system with the chain-map constraint.

use crate::error::{HocatError, Result};
use crate::graded::{BaseKind, BasisElt, Diagram, GMor, GObj, Vect};
use crate::linalg::{LinSys, VarTable};
use crate::rat::{rat, Rat};
use num_traits::Zero;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

/// A cone under a diagram: an apex and one leg per diagram object, commuting
/// with every diagram arrow.
#[derive(Debug, Clone)]
pub struct Cone {
    pub apex: GObj,
    pub legs: Vec<GMor>,
}

impl Cone {
    pub fn commutes(&self, diag: &Diagram) -> bool {
        diag.arrows
            .iter()
            .all(|(s, t, m)| self.legs[*t].compose(m) == self.legs[*s])
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Verdict {
    pub ok: bool,
    pub detail: String,
}

impl Verdict {
    fn yes() -> Self {
        Verdict { ok: true, detail: "mediating maps exist and are unique for all test cones".into() }
    }

    fn no(detail: String) -> Self {
        Verdict { ok: false, detail }
    }
}

/// Does a unique mediating map `candidate -> apex` exist for the cone?
/// Mediating maps are base maps: degree-preserving, commuting with the
/// differentials, with no weight constraint.
fn mediates_uniquely(candidate: &GObj, legs: &[GMor], cone: &Cone) -> std::result::Result<(), String> {
    let apex = &cone.apex;
    // variables: entries m[i][j] with matching degrees
    let mut var_of: Vec<Vec<Option<usize>>> = vec![vec![None; candidate.len()]; apex.len()];
    let mut vars = 0usize;
    for j in 0..candidate.len() {
        for i in 0..apex.len() {
            if apex.basis[i].degree == candidate.basis[j].degree {
                var_of[i][j] = Some(vars);
                vars += 1;
            }
        }
    }
    let mut sys = LinSys::new(vars);
    let mut homo = LinSys::new(vars);
    // chain-map condition: m(d x) = d(m x) for every candidate basis element
    if candidate.base == BaseKind::ChainQ {
        for j in 0..candidate.len() {
            // row per apex basis element of degree deg(j) - 1
            for i in 0..apex.len() {
                if apex.basis[i].degree != candidate.basis[j].degree - 1 {
                    continue;
                }
                let mut coeffs: Vec<(usize, Rat)> = Vec::new();
                for (j2, c) in candidate.diff_of(j) {
                    if let Some(v) = var_of[i][*j2] {
                        coeffs.push((v, c.clone()));
                    }
                }
                for i2 in 0..apex.len() {
                    if let Some(v) = var_of[i2][j] {
                        let c = apex
                            .diff_of(i2)
                            .iter()
                            .find(|(t, _)| *t == i)
                            .map(|(_, c)| c.clone())
                            .unwrap_or_else(Rat::zero);
                        if !c.is_zero() {
                            coeffs.push((v, -c));
                        }
                    }
                }
                sys.eq(coeffs.clone(), Rat::zero());
                homo.eq(coeffs, Rat::zero());
            }
        }
    }
    // factorization: m . leg_k = cone.legs[k]
    for (leg, cleg) in legs.iter().zip(&cone.legs) {
        for j in 0..leg.src.len() {
            let through = leg.col(j);
            let want = cleg.col(j);
            for i in 0..apex.len() {
                if apex.basis[i].degree != leg.src.basis[j].degree {
                    continue;
                }
                let mut coeffs: Vec<(usize, Rat)> = Vec::new();
                for (q, c) in through {
                    if let Some(v) = var_of[i][*q] {
                        coeffs.push((v, c.clone()));
                    }
                }
                let rhs = want
                    .iter()
                    .find(|(t, _)| *t == i)
                    .map(|(_, c)| c.clone())
                    .unwrap_or_else(Rat::zero);
                sys.eq(coeffs.clone(), rhs);
                homo.eq(coeffs, Rat::zero());
            }
        }
    }
    if sys.solve().is_none() {
        return Err("no mediating map exists".into());
    }
    // uniqueness: the homogeneous system must pin every variable to zero
    match homo.solution_space_dim() {
        0 => Ok(()),
        k => Err(format!("mediating map is not unique ({}-dimensional ambiguity)", k)),
    }
}

/// Certifies the candidate colimit against the supplied test cones.
pub fn check_universal_property(diag: &Diagram, candidate: &GObj, legs: &[GMor], cones: &[Cone]) -> Result<Verdict> {
    if legs.len() != diag.objects.len() {
        return Err(HocatError::Malformed("one leg per diagram object required".into()));
    }
    for (k, leg) in legs.iter().enumerate() {
        if leg.src != diag.objects[k] || leg.tgt != *candidate {
            return Err(HocatError::Malformed("candidate legs have wrong endpoints".into()));
        }
    }
    for (s, t, m) in &diag.arrows {
        if legs[*t].compose(m) != legs[*s] {
            return Ok(Verdict::no("candidate legs do not commute with the diagram".into()));
        }
    }
    for (k, cone) in cones.iter().enumerate() {
        if !cone.commutes(diag) {
            return Err(HocatError::Malformed(format!("test cone {} does not commute", k)));
        }
        if let Err(why) = mediates_uniquely(candidate, legs, cone) {
            return Ok(Verdict::no(format!("cone {}: {}", k, why)));
        }
    }
    Ok(Verdict::yes())
}

/// Generates commuting test cones under `diag`, independent of any candidate:
/// a random apex is drawn and the legs are sampled from the exact solution
/// space of the cone conditions.
pub fn random_cones(diag: &Diagram, count: usize, rng: &mut ChaCha8Rng) -> Vec<Cone> {
    let base = diag.objects[0].base;
    let mut out = Vec::new();
    let mut attempts = 0;
    while out.len() < count && attempts < count * 8 {
        attempts += 1;
        let apex = random_apex(base, diag, rng);
        if let Some(cone) = sample_cone(diag, &apex, rng) {
            out.push(cone);
        }
    }
    out
}

fn random_apex(base: BaseKind, diag: &Diagram, rng: &mut ChaCha8Rng) -> GObj {
    match base {
        BaseKind::FinSet => {
            let n = rng.gen_range(1..=3);
            GObj::new(
                base,
                (0..n)
                    .map(|i| BasisElt { degree: 0, weight: 0, word: vec![(u32::MAX, i as u32)] })
                    .collect(),
                Vec::new(),
            )
            .unwrap()
        }
        BaseKind::ChainQ => {
            // two adjacent degrees inside the diagram's degree span, random d
            let degs: Vec<i64> = diag
                .objects
                .iter()
                .flat_map(|o| o.basis.iter().map(|b| b.degree))
                .collect();
            let lo = degs.iter().copied().min().unwrap_or(0);
            let hi = degs.iter().copied().max().unwrap_or(0);
            let n = if lo >= hi { lo } else { rng.gen_range(lo..hi) };
            let d0 = rng.gen_range(1..=2usize);
            let d1 = rng.gen_range(1..=2usize);
            let mut basis = Vec::new();
            for i in 0..d0 {
                basis.push(BasisElt { degree: n, weight: 0, word: vec![(u32::MAX, i as u32)] });
            }
            for i in 0..d1 {
                basis.push(BasisElt { degree: n + 1, weight: 0, word: vec![(u32::MAX, 100 + i as u32)] });
            }
            let mut d = vec![Vec::new(); basis.len()];
            for (j, col) in d.iter_mut().enumerate().skip(d0) {
                let _ = j;
                for (i, c) in (0..d0).map(|i| (i, rng.gen_range(-2i64..=2))) {
                    if c != 0 {
                        col.push((i, rat(c)));
                    }
                }
            }
            GObj::new(base, basis, d).unwrap()
        }
    }
}

/// Samples one commuting cone with the given apex by solving the cone
/// conditions exactly and taking a random combination of a particular
/// solution with kernel vectors. Over the set base, legs must be monomial:
/// random monomial legs are drawn and checked.
fn sample_cone(diag: &Diagram, apex: &GObj, rng: &mut ChaCha8Rng) -> Option<Cone> {
    match apex.base {
        BaseKind::FinSet => {
            for _ in 0..24 {
                let legs: Vec<GMor> = diag
                    .objects
                    .iter()
                    .map(|o| {
                        let cols: Vec<Vect> = (0..o.len())
                            .map(|_| vec![(rng.gen_range(0..apex.len()), rat(1))])
                            .collect();
                        GMor::from_cols_unchecked_weights(o, apex, cols)
                    })
                    .collect();
                let cone = Cone { apex: apex.clone(), legs };
                if cone.commutes(diag) {
                    return Some(cone);
                }
            }
            // fall back to constant legs, which always commute
            let legs: Vec<GMor> = diag
                .objects
                .iter()
                .map(|o| {
                    let cols: Vec<Vect> = (0..o.len()).map(|_| vec![(0, rat(1))]).collect();
                    GMor::from_cols_unchecked_weights(o, apex, cols)
                })
                .collect();
            Some(Cone { apex: apex.clone(), legs })
        }
        BaseKind::ChainQ => {
            // variables: all degree-compatible entries of all legs
            let mut tables: Vec<VarTable> = Vec::new();
            let mut offset = 0usize;
            let mut offsets = Vec::new();
            for o in &diag.objects {
                let mut vt = VarTable::new();
                vt.add_block(0, apex.len(), o.len());
                offsets.push(offset);
                offset += vt.len();
                tables.push(vt);
            }
            let var = |k: usize, i: usize, j: usize| offsets[k] + i * diag.objects[k].len() + j;
            let mut homo = LinSys::new(offset);
            // degree mismatch forces zero
            for (k, o) in diag.objects.iter().enumerate() {
                for i in 0..apex.len() {
                    for j in 0..o.len() {
                        if apex.basis[i].degree != o.basis[j].degree {
                            homo.eq(vec![(var(k, i, j), rat(1))], Rat::zero());
                        }
                    }
                }
            }
            // chain-map condition per leg
            for (k, o) in diag.objects.iter().enumerate() {
                for j in 0..o.len() {
                    for i in 0..apex.len() {
                        if apex.basis[i].degree != o.basis[j].degree - 1 {
                            continue;
                        }
                        let mut coeffs: Vec<(usize, Rat)> = Vec::new();
                        for (j2, c) in o.diff_of(j) {
                            coeffs.push((var(k, i, *j2), c.clone()));
                        }
                        for i2 in 0..apex.len() {
                            let c = apex
                                .diff_of(i2)
                                .iter()
                                .find(|(t, _)| *t == i)
                                .map(|(_, c)| c.clone())
                                .unwrap_or_else(Rat::zero);
                            if !c.is_zero() {
                                coeffs.push((var(k, i2, j), -c));
                            }
                        }
                        homo.eq(coeffs, Rat::zero());
                    }
                }
            }
            // commutation with diagram arrows: leg_t . m = leg_s
            for (s, t, m) in &diag.arrows {
                for j in 0..m.src.len() {
                    for i in 0..apex.len() {
                        let mut coeffs: Vec<(usize, Rat)> = Vec::new();
                        for (q, c) in m.col(j) {
                            coeffs.push((var(*t, i, *q), c.clone()));
                        }
                        coeffs.push((var(*s, i, j), -rat(1)));
                        homo.eq(coeffs, Rat::zero());
                    }
                }
            }
            let kernel = homo.kernel();
            if kernel.is_empty() {
                // only the zero cone commutes; still a valid test cone
            }
            let mut sol = vec![Rat::zero(); offset];
            for k in &kernel {
                let c = rat(rng.gen_range(-2i64..=2));
                for (i, v) in k.iter().enumerate() {
                    if !v.is_zero() && !c.is_zero() {
                        sol[i] = sol[i].clone() + v * &c;
                    }
                }
            }
            let legs: Vec<GMor> = diag
                .objects
                .iter()
                .enumerate()
                .map(|(k, o)| {
                    let cols: Vec<Vect> = (0..o.len())
                        .map(|j| {
                            (0..apex.len())
                                .filter_map(|i| {
                                    let v = sol[var(k, i, j)].clone();
                                    if v.is_zero() {
                                        None
                                    } else {
                                        Some((i, v))
                                    }
                                })
                                .collect()
                        })
                        .collect();
                    GMor::from_cols_unchecked_weights(o, apex, cols)
                })
                .collect();
            let cone = Cone { apex: apex.clone(), legs };
            if cone.commutes(diag) {
                Some(cone)
            } else {
                None
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graded::{coequalizer, coproduct, pushout, BasisElt};
    use rand::SeedableRng;

    fn two_elt_set() -> GObj {
        GObj::new(
            BaseKind::FinSet,
            vec![
                BasisElt { degree: 0, weight: 0, word: vec![(0, 0)] },
                BasisElt { degree: 0, weight: 0, word: vec![(0, 1)] },
            ],
            Vec::new(),
        )
        .unwrap()
    }

    #[test]
    fn empty_pushout_certifies() {
        let e = GObj::initial(BaseKind::FinSet);
        let id = GMor::identity(&e);
        let diag = Diagram { objects: vec![e.clone(), e.clone(), e.clone()], arrows: vec![(0, 1, id.clone()), (0, 2, id.clone())] };
        let p = pushout(&id, &id).unwrap();
        let legs = vec![GMor::zero(&e, &p.obj), p.from_left.clone(), p.from_right.clone()];
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let cones = random_cones(&diag, 3, &mut rng);
        let v = check_universal_property(&diag, &p.obj, &legs, &cones).unwrap();
        assert!(v.ok, "{}", v.detail);
    }

    #[test]
    fn coequalizer_of_equal_maps_certifies_and_wrong_candidate_fails() {
        let b = two_elt_set();
        let f = GMor::identity(&b);
        let diag = Diagram {
            objects: vec![b.clone(), b.clone()],
            arrows: vec![(0, 1, f.clone()), (0, 1, f.clone())],
        };
        let q = coequalizer(&f, &f).unwrap();
        let legs = vec![q.proj.compose(&f), q.proj.clone()];
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let cones = random_cones(&diag, 3, &mut rng);
        let v = check_universal_property(&diag, &q.obj, &legs, &cones).unwrap();
        assert!(v.ok, "{}", v.detail);

        // wrong candidate: target + target, legs through the first copy;
        // the mediating map is not unique (checked by explicit enumeration
        // of the solution space)
        let (bb, inl, _) = coproduct(&b, &b);
        let wrong_legs = vec![inl.clone(), inl.clone()];
        let v2 = check_universal_property(&diag, &bb, &wrong_legs, &cones).unwrap();
        assert!(!v2.ok);
        assert!(v2.detail.contains("not unique"), "{}", v2.detail);
    }

    #[test]
    fn chain_pushout_certifies() {
        use crate::rat::rat;
        // segment-like chain data
        let h = GObj::new(
            BaseKind::ChainQ,
            vec![
                BasisElt { degree: 0, weight: 0, word: vec![] },
                BasisElt { degree: 0, weight: 0, word: vec![(0, 1)] },
                BasisElt { degree: 1, weight: 0, word: vec![(0, 2)] },
            ],
            vec![vec![], vec![], vec![(0, rat(-1)), (1, rat(1))]],
        )
        .unwrap();
        let unit = GObj::unit_obj(BaseKind::ChainQ);
        let v0 = GMor::from_cols(&unit, &h, vec![crate::graded::vect_single(0)]).unwrap();
        let p = pushout(&v0, &v0).unwrap();
        let diag = Diagram {
            objects: vec![unit.clone(), h.clone(), h.clone()],
            arrows: vec![(0, 1, v0.clone()), (0, 2, v0.clone())],
        };
        let legs = vec![p.from_left.compose(&v0), p.from_left.clone(), p.from_right.clone()];
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let cones = random_cones(&diag, 3, &mut rng);
        assert!(!cones.is_empty());
        let v = check_universal_property(&diag, &p.obj, &legs, &cones).unwrap();
        assert!(v.ok, "{}", v.detail);
    }
}
