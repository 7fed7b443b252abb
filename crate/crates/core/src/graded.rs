//! Weight-graded based objects over the two bases, with the finite colimits
//! every construction in the engine is assembled from.
//!
//! A `GObj` is a based object whose basis elements carry a chain degree, a
//! filtration weight, and a canonical word (the flattened composite of
//! attached generator letters it represents). Stage `p` of a filtered object
//! is the span of basis elements of weight at most `p`; differentials and
//! morphisms never raise weight, so stages are subobjects and the stage
//! inclusions are cofibrations.
//!
//! Both bases share this representation. Finite sets are embedded as their
//! free linearizations: set maps are the monomial matrices, and since the
//! linearization functor preserves colimits, pushouts and coequalizers of
//! monomial data compute the honest set-level colimits with the same
//! canonical representatives as a union-find would pick.

use crate::chain::ChainComplex;
use crate::error::{HocatError, Result};
use crate::linalg::{self, RatMatrix};
use crate::rat::{sign_pow, Rat};
use num_traits::{One, Zero};
use std::collections::BTreeMap;

/// One attached-generator letter: (attachment index, basis index in Y).
pub type Letter = (u32, u32);

/// Canonical composite word, first-applied letter first.
pub type Word = Vec<Letter>;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BaseKind {
    ChainQ,
    FinSet,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BasisElt {
    pub degree: i64,
    pub weight: u32,
    pub word: Word,
}

impl BasisElt {
    pub fn key(&self) -> (u32, usize, Word) {
        (self.weight, self.word.len(), self.word.clone())
    }
}

/// Sparse formal combination over a basis; over the set base exactly one
/// entry with coefficient 1.
pub type Vect = Vec<(usize, Rat)>;

pub fn vect_add(a: &Vect, b: &Vect) -> Vect {
    let mut m: BTreeMap<usize, Rat> = BTreeMap::new();
    for (i, c) in a.iter().chain(b.iter()) {
        *m.entry(*i).or_insert_with(Rat::zero) += c;
    }
    m.into_iter().filter(|(_, c)| !c.is_zero()).collect()
}

pub fn vect_scale(a: &Vect, c: &Rat) -> Vect {
    if c.is_zero() {
        return Vec::new();
    }
    a.iter().map(|(i, v)| (*i, v * c)).collect()
}

pub fn vect_single(i: usize) -> Vect {
    vec![(i, Rat::one())]
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GObj {
    pub base: BaseKind,
    pub basis: Vec<BasisElt>,
    /// Differential, column-sparse: `d[j]` is d of basis element `j`.
    /// Always empty over the set base.
    d: Vec<Vect>,
}

impl GObj {
    pub fn new(base: BaseKind, basis: Vec<BasisElt>, d: Vec<Vect>) -> Result<Self> {
        if base == BaseKind::FinSet {
            if d.iter().any(|c| !c.is_empty()) {
                return Err(HocatError::Malformed("set-base objects carry no differential".into()));
            }
            if basis.iter().any(|b| b.degree != 0) {
                return Err(HocatError::Malformed("set-base objects live in degree 0".into()));
            }
        }
        let d = if d.is_empty() { vec![Vec::new(); basis.len()] } else { d };
        if d.len() != basis.len() {
            return Err(HocatError::Malformed("differential has wrong length".into()));
        }
        let obj = GObj { base, basis, d };
        for j in 0..obj.len() {
            for (i, _) in &obj.d[j] {
                if *i >= obj.len() {
                    return Err(HocatError::Malformed("differential index out of range".into()));
                }
                if obj.basis[*i].degree != obj.basis[j].degree - 1 {
                    return Err(HocatError::Malformed("differential must lower degree by 1".into()));
                }
                if obj.basis[*i].weight > obj.basis[j].weight {
                    return Err(HocatError::Malformed("differential must not raise weight".into()));
                }
            }
        }
        // d . d = 0
        for j in 0..obj.len() {
            let mut acc: Vect = Vec::new();
            for (i, c) in &obj.d[j] {
                acc = vect_add(&acc, &vect_scale(&obj.d[*i], c));
            }
            if !acc.is_empty() {
                return Err(HocatError::Internal(format!("d*d != 0 at basis element {}", j)));
            }
        }
        Ok(obj)
    }

    pub fn initial(base: BaseKind) -> Self {
        GObj { base, basis: Vec::new(), d: Vec::new() }
    }

    /// The monoidal unit: one weight-0 element with the empty word.
    pub fn unit_obj(base: BaseKind) -> Self {
        GObj {
            base,
            basis: vec![BasisElt { degree: 0, weight: 0, word: Vec::new() }],
            d: vec![Vec::new()],
        }
    }

    pub fn len(&self) -> usize {
        self.basis.len()
    }

    pub fn is_empty(&self) -> bool {
        self.basis.is_empty()
    }

    pub fn diff_of(&self, j: usize) -> &Vect {
        &self.d[j]
    }

    pub fn max_weight(&self) -> u32 {
        self.basis.iter().map(|b| b.weight).max().unwrap_or(0)
    }

    /// Count of basis elements of weight at most `p`.
    pub fn stage_size(&self, p: u32) -> usize {
        self.basis.iter().filter(|b| b.weight <= p).count()
    }

    /// Per-(weight, degree) dimension table.
    pub fn dim_table(&self) -> BTreeMap<(u32, i64), usize> {
        let mut out = BTreeMap::new();
        for b in &self.basis {
            *out.entry((b.weight, b.degree)).or_insert(0) += 1;
        }
        out
    }

    /// Coordinate subobject spanned by the given (sorted, distinct) indices.
    /// Errors unless the span is closed under the differential.
    pub fn subobject(&self, keep: &[usize]) -> Result<(GObj, GMor)> {
        let pos: BTreeMap<usize, usize> = keep.iter().enumerate().map(|(k, &i)| (i, k)).collect();
        let mut d = Vec::with_capacity(keep.len());
        for &j in keep {
            let mut col = Vec::new();
            for (i, c) in &self.d[j] {
                let Some(&t) = pos.get(i) else {
                    return Err(HocatError::Malformed("span is not closed under d".into()));
                };
                col.push((t, c.clone()));
            }
            d.push(col);
        }
        let sub = GObj::new(self.base, keep.iter().map(|&i| self.basis[i].clone()).collect(), d)?;
        let incl = GMor::from_cols(&sub, self, keep.iter().map(|&i| vect_single(i)).collect())?;
        Ok((sub, incl))
    }

    /// Stage-`p` truncation with its bond inclusion.
    pub fn truncate(&self, p: u32) -> (GObj, GMor) {
        let keep: Vec<usize> = (0..self.len()).filter(|&i| self.basis[i].weight <= p).collect();
        self.subobject(&keep).expect("weight truncations are d-closed")
    }

    /// The underlying chain complex of the stage-`p` truncation, together
    /// with the map flat-index -> (degree, index within degree).
    pub fn to_chain(&self, p: u32) -> (ChainComplex, Vec<(i64, usize)>) {
        let keep: Vec<usize> = (0..self.len()).filter(|&i| self.basis[i].weight <= p).collect();
        let mut dims: BTreeMap<i64, usize> = BTreeMap::new();
        let mut place: Vec<(i64, usize)> = vec![(0, 0); self.len()];
        for &i in &keep {
            let n = self.basis[i].degree;
            let k = dims.entry(n).or_insert(0);
            place[i] = (n, *k);
            *k += 1;
        }
        let mut mats: BTreeMap<i64, RatMatrix> = BTreeMap::new();
        for (&n, &c) in &dims {
            let r = dims.get(&(n - 1)).copied().unwrap_or(0);
            if r > 0 && c > 0 {
                mats.insert(n, RatMatrix::zero(r, c));
            }
        }
        for &j in &keep {
            let (n, jj) = place[j];
            for (i, coef) in &self.d[j] {
                if self.basis[*i].weight > p {
                    continue; // cannot happen: d does not raise weight
                }
                let (_, ii) = place[*i];
                if let Some(m) = mats.get_mut(&n) {
                    let v = m.at(ii, jj).clone() + coef;
                    m.set(ii, jj, v);
                }
            }
        }
        let cx = ChainComplex::new(dims, mats).expect("graded object is a valid complex");
        (cx, place)
    }

    /// Finds the basis index carrying exactly this word, if any.
    pub fn index_of_word(&self, w: &Word) -> Option<usize> {
        self.basis.iter().position(|b| &b.word == w)
    }
}

/// A weight-nonincreasing, degree-preserving morphism with owned endpoints.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GMor {
    pub src: GObj,
    pub tgt: GObj,
    cols: Vec<Vect>,
}

impl GMor {
    pub fn from_cols(src: &GObj, tgt: &GObj, cols: Vec<Vect>) -> Result<Self> {
        if src.base != tgt.base {
            return Err(HocatError::Malformed("base mismatch".into()));
        }
        if cols.len() != src.len() {
            return Err(HocatError::Malformed("morphism has wrong number of columns".into()));
        }
        for (j, col) in cols.iter().enumerate() {
            for (i, _) in col {
                if *i >= tgt.len() {
                    return Err(HocatError::Malformed("morphism index out of range".into()));
                }
                if tgt.basis[*i].degree != src.basis[j].degree {
                    return Err(HocatError::Malformed("morphism must preserve degree".into()));
                }
                if tgt.basis[*i].weight > src.basis[j].weight {
                    return Err(HocatError::Malformed(format!(
                        "morphism raises weight at column {}",
                        j
                    )));
                }
            }
            if src.base == BaseKind::FinSet
                && !(col.len() == 1 && col[0].1.is_one())
            {
                return Err(HocatError::Malformed("set-base morphisms must be monomial".into()));
            }
        }
        Ok(GMor { src: src.clone(), tgt: tgt.clone(), cols })
    }

    pub fn from_basis_map(src: &GObj, tgt: &GObj, f: impl Fn(usize) -> Vect) -> Result<Self> {
        GMor::from_cols(src, tgt, (0..src.len()).map(f).collect())
    }

    /// Plain base map: degree-preserving but free to raise weight (used by
    /// test cones, whose apexes carry no meaningful filtration).
    pub fn from_cols_unchecked_weights(src: &GObj, tgt: &GObj, cols: Vec<Vect>) -> Self {
        assert_eq!(src.base, tgt.base);
        assert_eq!(cols.len(), src.len());
        for (j, col) in cols.iter().enumerate() {
            for (i, _) in col {
                assert!(*i < tgt.len());
                assert_eq!(tgt.basis[*i].degree, src.basis[j].degree, "degree mismatch");
            }
        }
        GMor { src: src.clone(), tgt: tgt.clone(), cols }
    }

    pub fn identity(a: &GObj) -> Self {
        GMor {
            src: a.clone(),
            tgt: a.clone(),
            cols: (0..a.len()).map(vect_single).collect(),
        }
    }

    pub fn zero(src: &GObj, tgt: &GObj) -> Self {
        GMor { src: src.clone(), tgt: tgt.clone(), cols: vec![Vec::new(); src.len()] }
    }

    pub fn col(&self, j: usize) -> &Vect {
        &self.cols[j]
    }

    pub fn apply(&self, v: &Vect) -> Vect {
        let mut acc: Vect = Vec::new();
        for (j, c) in v {
            acc = vect_add(&acc, &vect_scale(&self.cols[*j], c));
        }
        acc
    }

    pub fn compose(&self, first: &GMor) -> GMor {
        assert_eq!(first.tgt, self.src, "composition mismatch");
        GMor {
            src: first.src.clone(),
            tgt: self.tgt.clone(),
            cols: first.cols.iter().map(|c| self.apply(c)).collect(),
        }
    }

    /// Exact commutation with the differentials.
    pub fn is_chain_map(&self) -> bool {
        for j in 0..self.src.len() {
            let lhs = self.apply(self.src.diff_of(j));
            let mut rhs: Vect = Vec::new();
            for (i, c) in &self.cols[j] {
                rhs = vect_add(&rhs, &vect_scale(self.tgt.diff_of(*i), c));
            }
            if lhs != rhs {
                return false;
            }
        }
        true
    }

    pub fn to_matrix(&self) -> RatMatrix {
        let mut m = RatMatrix::zero(self.tgt.len(), self.src.len());
        for (j, col) in self.cols.iter().enumerate() {
            for (i, c) in col {
                m.set(*i, j, c.clone());
            }
        }
        m
    }

    /// Restriction to the stage-`p` truncations of source and target.
    pub fn truncate(&self, p: u32) -> GMor {
        let (src, _) = self.src.truncate(p);
        let (tgt, _) = self.tgt.truncate(p);
        let src_keep: Vec<usize> =
            (0..self.src.len()).filter(|&i| self.src.basis[i].weight <= p).collect();
        let mut tgt_pos: BTreeMap<usize, usize> = BTreeMap::new();
        for (k, i) in (0..self.tgt.len()).filter(|&i| self.tgt.basis[i].weight <= p).enumerate() {
            tgt_pos.insert(i, k);
        }
        let cols = src_keep
            .iter()
            .map(|&j| {
                self.cols[j]
                    .iter()
                    .map(|(i, c)| (tgt_pos[i], c.clone()))
                    .collect()
            })
            .collect();
        GMor { src, tgt, cols }
    }

    pub fn is_cofibration(&self) -> bool {
        linalg::is_injective(&self.to_matrix())
    }

    pub fn is_fibration(&self) -> bool {
        linalg::is_surjective(&self.to_matrix())
    }

    /// Base-appropriate weak equivalence: bijections over sets,
    /// quasi-isomorphisms (at every stage, on the full object) over chains.
    pub fn is_weak_equivalence(&self) -> bool {
        match self.src.base {
            BaseKind::FinSet => {
                let m = self.to_matrix();
                linalg::is_injective(&m) && linalg::is_surjective(&m)
            }
            BaseKind::ChainQ => {
                let p = self.src.max_weight().max(self.tgt.max_weight());
                let f = self.to_chain_map(p);
                f.is_quasi_iso()
            }
        }
    }

    /// The underlying chain map of the stage-`p` truncation.
    pub fn to_chain_map(&self, p: u32) -> crate::chain::ChainMap {
        let (csrc, src_place) = self.src.to_chain(p);
        let (ctgt, tgt_place) = self.tgt.to_chain(p);
        let mut mats: BTreeMap<i64, RatMatrix> = BTreeMap::new();
        for (&n, _) in csrc.degrees().iter().map(|n| (n, ())).collect::<BTreeMap<_, _>>().iter() {
            let r = ctgt.dim(*n);
            let c = csrc.dim(*n);
            if r > 0 && c > 0 {
                mats.insert(*n, RatMatrix::zero(r, c));
            }
        }
        for j in 0..self.src.len() {
            if self.src.basis[j].weight > p {
                continue;
            }
            let (n, jj) = src_place[j];
            for (i, coef) in &self.cols[j] {
                let (_, ii) = tgt_place[*i];
                if let Some(m) = mats.get_mut(&n) {
                    let v = m.at(ii, jj).clone() + coef;
                    m.set(ii, jj, v);
                }
            }
        }
        crate::chain::ChainMap::new(&csrc, &ctgt, mats).expect("graded morphism is a chain map")
    }
}

// --- tensor ----------------------------------------------------------------

/// Tensor product. Basis pairs `(i, j)` in lexicographic order; the word of
/// a pair is `word(right) ++ word(left)` (right factor applied first), and
/// the differential follows the Koszul convention.
pub fn tensor(a: &GObj, b: &GObj) -> (GObj, TensorIdx) {
    assert_eq!(a.base, b.base);
    let mut basis = Vec::with_capacity(a.len() * b.len());
    let mut pairs = Vec::with_capacity(a.len() * b.len());
    for i in 0..a.len() {
        for j in 0..b.len() {
            let mut word = b.basis[j].word.clone();
            word.extend_from_slice(&a.basis[i].word);
            basis.push(BasisElt {
                degree: a.basis[i].degree + b.basis[j].degree,
                weight: a.basis[i].weight + b.basis[j].weight,
                word,
            });
            pairs.push((i, j));
        }
    }
    let idx = TensorIdx { left: a.len(), right: b.len() };
    let mut d = vec![Vec::new(); basis.len()];
    if a.base == BaseKind::ChainQ {
        for (k, &(i, j)) in pairs.iter().enumerate() {
            let mut col: Vect = Vec::new();
            for (i2, c) in a.diff_of(i) {
                col = vect_add(&col, &vect_scale(&vect_single(idx.pos(*i2, j)), c));
            }
            let sg = sign_pow(a.basis[i].degree);
            for (j2, c) in b.diff_of(j) {
                col = vect_add(&col, &vect_scale(&vect_single(idx.pos(i, *j2)), &(&sg * c)));
            }
            d[k] = col;
        }
    }
    let obj = GObj::new(a.base, basis, d).expect("tensor of valid objects is valid");
    (obj, idx)
}

#[derive(Debug, Clone, Copy)]
pub struct TensorIdx {
    pub left: usize,
    pub right: usize,
}

impl TensorIdx {
    pub fn pos(&self, i: usize, j: usize) -> usize {
        i * self.right + j
    }

    pub fn unpos(&self, k: usize) -> (usize, usize) {
        (k / self.right, k % self.right)
    }
}

/// Tensor of two degree-0 morphisms (no Koszul sign at this level).
pub fn tensor_mor(f: &GMor, g: &GMor) -> GMor {
    let (src, sidx) = tensor(&f.src, &g.src);
    let (tgt, tidx) = tensor(&f.tgt, &g.tgt);
    let mut cols = Vec::with_capacity(src.len());
    for k in 0..src.len() {
        let (i, j) = sidx.unpos(k);
        let mut col: Vect = Vec::new();
        for (i2, c1) in f.col(i) {
            for (j2, c2) in g.col(j) {
                col = vect_add(&col, &vect_scale(&vect_single(tidx.pos(*i2, *j2)), &(c1 * c2)));
            }
        }
        cols.push(col);
    }
    GMor::from_cols(&src, &tgt, cols).expect("tensor of morphisms is valid")
}

/// n-fold tensor product, left to right; the empty product is the unit.
pub fn tensor_many(base: BaseKind, factors: &[&GObj]) -> (GObj, Vec<usize>) {
    let mut acc = GObj::unit_obj(base);
    let mut strides = Vec::new();
    for f in factors {
        let (t, _) = tensor(&acc, f);
        strides.push(f.len());
        acc = t;
    }
    (acc, strides)
}

/// Flat index of a tuple in a `tensor_many` result.
pub fn tuple_pos(strides: &[usize], tuple: &[usize]) -> usize {
    assert_eq!(strides.len(), tuple.len());
    let mut k = 0;
    for (s, &t) in strides.iter().zip(tuple) {
        k = k * s + t;
    }
    k
}

// --- coproducts and quotients ------------------------------------------------

pub fn coproduct(a: &GObj, b: &GObj) -> (GObj, GMor, GMor) {
    assert_eq!(a.base, b.base);
    let mut basis = a.basis.clone();
    basis.extend(b.basis.iter().cloned());
    let mut d: Vec<Vect> = a.d.clone();
    for col in &b.d {
        d.push(col.iter().map(|(i, c)| (i + a.len(), c.clone())).collect());
    }
    let obj = GObj::new(a.base, basis, d).expect("coproduct of valid objects");
    let inl = GMor::from_cols(a, &obj, (0..a.len()).map(vect_single).collect()).unwrap();
    let inr = GMor::from_cols(b, &obj, (0..b.len()).map(|j| vect_single(a.len() + j)).collect()).unwrap();
    (obj, inl, inr)
}

pub fn coproduct_many(base: BaseKind, objs: &[&GObj]) -> (GObj, Vec<GMor>) {
    let mut acc = GObj::initial(base);
    let mut offsets = Vec::new();
    for o in objs {
        offsets.push(acc.len());
        let (n, _, _) = coproduct(&acc, o);
        acc = n;
    }
    let legs = objs
        .iter()
        .zip(&offsets)
        .map(|(o, &off)| {
            GMor::from_cols(o, &acc, (0..o.len()).map(|j| vect_single(off + j)).collect()).unwrap()
        })
        .collect();
    (acc, legs)
}

/// Quotient data: projection and a coordinate section with
/// `proj . sect = id`.
#[derive(Debug, Clone)]
pub struct Quotient {
    pub obj: GObj,
    pub proj: GMor,
    pub sect: GMor,
}

/// Quotient of `x` by the span of the relation vectors. Representatives are
/// chosen by eliminating basis elements with the largest
/// `(weight, word length, word)` key first, so surviving representatives are
/// the canonically least members of their classes. The span must be closed
/// under the differential (checked exactly).
pub fn quotient(x: &GObj, rels: &[Vect]) -> Result<Quotient> {
    let n = x.len();
    let nontrivial: Vec<&Vect> = rels.iter().filter(|r| !r.is_empty()).collect();
    if nontrivial.is_empty() {
        let id = GMor::identity(x);
        return Ok(Quotient { obj: x.clone(), proj: id.clone(), sect: id });
    }
    let mut m = RatMatrix::zero(nontrivial.len(), n);
    for (r, rel) in nontrivial.iter().enumerate() {
        for (i, c) in rel.iter() {
            let v = m.at(r, *i).clone() + c;
            m.set(r, *i, v);
        }
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| x.basis[b].key().cmp(&x.basis[a].key()).then(b.cmp(&a)));
    let ech = linalg::rref_in_order(&m, &order);
    let pivots = ech.pivot_cols();
    let keep: Vec<usize> = (0..n).filter(|j| !pivots.contains(j)).collect();
    let pos: BTreeMap<usize, usize> = keep.iter().enumerate().map(|(k, &i)| (i, k)).collect();
    // projection columns
    let mut proj_cols: Vec<Vect> = (0..n)
        .map(|j| pos.get(&j).map(|&k| vect_single(k)).unwrap_or_default())
        .collect();
    for &(r, pc) in &ech.pivots {
        let mut col: Vect = Vec::new();
        for &j in &keep {
            let v = -ech.rref.at(r, j).clone();
            if !v.is_zero() {
                col.push((pos[&j], v));
            }
        }
        proj_cols[pc] = col;
    }
    // quotient differential via proj . d . sect
    let mut d: Vec<Vect> = Vec::with_capacity(keep.len());
    for &j in &keep {
        let mut col: Vect = Vec::new();
        for (i, c) in x.diff_of(j) {
            col = vect_add(&col, &vect_scale(&proj_cols[*i], c));
        }
        d.push(col);
    }
    let basis: Vec<BasisElt> = keep.iter().map(|&i| x.basis[i].clone()).collect();
    let obj = GObj::new(x.base, basis, d)?;
    let proj = GMor::from_cols(x, &obj, proj_cols)?;
    if !proj.is_chain_map() {
        return Err(HocatError::Malformed("relation span is not closed under d".into()));
    }
    let sect = GMor::from_cols(&obj, x, keep.iter().map(|&i| vect_single(i)).collect())?;
    Ok(Quotient { obj, proj, sect })
}

/// Pushout of `B <-f- A -g-> C`.
#[derive(Debug, Clone)]
pub struct PushoutData {
    pub obj: GObj,
    pub from_left: GMor,
    pub from_right: GMor,
}

pub fn pushout(f: &GMor, g: &GMor) -> Result<PushoutData> {
    if f.src != g.src {
        return Err(HocatError::Malformed("pushout legs must share their source".into()));
    }
    let (sum, inl, inr) = coproduct(&f.tgt, &g.tgt);
    let rels: Vec<Vect> = (0..f.src.len())
        .map(|j| {
            let l = inl.apply(f.col(j));
            let r = inr.apply(g.col(j));
            vect_add(&l, &vect_scale(&r, &-Rat::one()))
        })
        .collect();
    let q = quotient(&sum, &rels)?;
    Ok(PushoutData {
        obj: q.obj.clone(),
        from_left: q.proj.compose(&inl),
        from_right: q.proj.compose(&inr),
    })
}

pub fn coequalizer(f: &GMor, g: &GMor) -> Result<Quotient> {
    if f.src != g.src || f.tgt != g.tgt {
        return Err(HocatError::Malformed("coequalizer needs a parallel pair".into()));
    }
    let rels: Vec<Vect> = (0..f.src.len())
        .map(|j| vect_add(f.col(j), &vect_scale(g.col(j), &-Rat::one())))
        .collect();
    quotient(&f.tgt, &rels)
}

/// A finite diagram: objects and arrows `(src index, tgt index, morphism)`.
#[derive(Debug, Clone)]
pub struct Diagram {
    pub objects: Vec<GObj>,
    pub arrows: Vec<(usize, usize, GMor)>,
}

#[derive(Debug, Clone)]
pub struct ColimData {
    pub obj: GObj,
    pub legs: Vec<GMor>,
}

/// Colimit of a finite diagram as the quotient of the coproduct by
/// `leg_tgt . arrow - leg_src` for every arrow.
pub fn colimit(diag: &Diagram) -> Result<ColimData> {
    if diag.objects.is_empty() {
        return Err(HocatError::Malformed("empty diagram".into()));
    }
    let base = diag.objects[0].base;
    let refs: Vec<&GObj> = diag.objects.iter().collect();
    let (sum, injs) = coproduct_many(base, &refs);
    let mut rels = Vec::new();
    for (s, t, m) in &diag.arrows {
        if m.src != diag.objects[*s] || m.tgt != diag.objects[*t] {
            return Err(HocatError::Malformed("diagram arrow endpoints do not match".into()));
        }
        for j in 0..m.src.len() {
            let via = injs[*t].apply(m.col(j));
            let direct = injs[*s].col(j).clone();
            rels.push(vect_add(&direct, &vect_scale(&via, &-Rat::one())));
        }
    }
    let q = quotient(&sum, &rels)?;
    let legs = injs.iter().map(|i| q.proj.compose(i)).collect();
    Ok(ColimData { obj: q.obj, legs })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::rat;

    fn set_obj(words: &[&[Letter]]) -> GObj {
        GObj::new(
            BaseKind::FinSet,
            words
                .iter()
                .map(|w| BasisElt { degree: 0, weight: w.len() as u32, word: w.to_vec() })
                .collect(),
            Vec::new(),
        )
        .unwrap()
    }

    #[test]
    fn tensor_weights_and_words() {
        let a = set_obj(&[&[(0, 0)]]);
        let b = set_obj(&[&[(1, 0)]]);
        let (t, _) = tensor(&a, &b);
        assert_eq!(t.len(), 1);
        assert_eq!(t.basis[0].weight, 2);
        // right factor applied first
        assert_eq!(t.basis[0].word, vec![(1, 0), (0, 0)]);
    }

    #[test]
    fn quotient_keeps_least_representative() {
        // identify a two-letter word with the empty word
        let x = set_obj(&[&[], &[(0, 0), (1, 0)]]);
        let rel = vec![vec![(0, rat(1)), (1, rat(-1))]];
        let q = quotient(&x, &rel).unwrap();
        assert_eq!(q.obj.len(), 1);
        assert_eq!(q.obj.basis[0].word, Vec::<Letter>::new());
        assert_eq!(q.proj.col(1), &vec![(0, rat(1))]);
    }

    #[test]
    fn set_colimits_match_union_find() {
        // coequalizer identifying the two elements of {a, b}
        let a = set_obj(&[&[(9, 9)]]);
        let b = set_obj(&[&[(0, 0)], &[(0, 1)]]);
        let f = GMor::from_cols(&a, &b, vec![vect_single(0)]).unwrap();
        let g = GMor::from_cols(&a, &b, vec![vect_single(1)]).unwrap();
        let q = coequalizer(&f, &g).unwrap();
        assert_eq!(q.obj.len(), 1);
        assert_eq!(q.obj.basis[0].word, vec![(0, 0)]);
        // pushout of b <- a -> b along the same legs keeps three classes
        let p = pushout(&f, &g).unwrap();
        assert_eq!(p.obj.len(), 3);
        assert_eq!(p.from_left.apply(&vect_single(0)), p.from_right.apply(&vect_single(1)));
    }

    #[test]
    fn chain_tensor_diff_squares() {
        // the segment as a graded object
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
        let (hh, _) = tensor(&h, &h);
        assert_eq!(hh.len(), 9);
        // validity (d*d = 0) checked at construction
        let (cx, _) = hh.to_chain(0);
        assert_eq!((cx.dim(0), cx.dim(1), cx.dim(2)), (4, 4, 1));
    }

    #[test]
    fn colimit_of_span() {
        let a = set_obj(&[&[(5, 5)]]);
        let b = set_obj(&[&[(0, 0)]]);
        let c = set_obj(&[&[(1, 1)]]);
        let f = GMor::from_cols(&a, &b, vec![vect_single(0)]).unwrap();
        let g = GMor::from_cols(&a, &c, vec![vect_single(0)]).unwrap();
        let diag = Diagram {
            objects: vec![a, b, c],
            arrows: vec![(0, 1, f), (0, 2, g)],
        };
        let col = colimit(&diag).unwrap();
        assert_eq!(col.obj.len(), 1);
        assert_eq!(col.legs.len(), 3);
    }
}
