//! Finite sets with the model data used for reporting: cofibrations are
//! injections, weak equivalences are bijections, fibrations are surjections.
//! Colimits are computed by union-find with deterministic class
//! representatives.

use crate::error::{HocatError, Result};
use serde_json::{json, Map as JsonMap, Value};
use std::collections::BTreeMap;

/// A finite set of distinct atom identifiers, kept in sorted order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FinSetObj {
    elements: Vec<String>,
}

impl FinSetObj {
    pub fn new(mut elements: Vec<String>) -> Result<Self> {
        elements.sort();
        for w in elements.windows(2) {
            if w[0] == w[1] {
                return Err(HocatError::Malformed(format!("duplicate element {:?}", w[0])));
            }
        }
        Ok(FinSetObj { elements })
    }

    pub fn empty() -> Self {
        FinSetObj { elements: Vec::new() }
    }

    pub fn singleton(name: &str) -> Self {
        FinSetObj { elements: vec![name.to_string()] }
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn elements(&self) -> &[String] {
        &self.elements
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.elements.binary_search_by(|e| e.as_str().cmp(name)).ok()
    }
}

/// A total map between finite sets, stored as target indices per source
/// index.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FinSetMap {
    pub src: FinSetObj,
    pub tgt: FinSetObj,
    img: Vec<usize>,
}

impl FinSetMap {
    pub fn new(src: FinSetObj, tgt: FinSetObj, assignment: &BTreeMap<String, String>) -> Result<Self> {
        let mut img = Vec::with_capacity(src.len());
        for e in src.elements() {
            let t = assignment
                .get(e)
                .ok_or_else(|| HocatError::Malformed(format!("map misses element {:?}", e)))?;
            let idx = tgt
                .index_of(t)
                .ok_or_else(|| HocatError::Malformed(format!("image {:?} is outside the target", t)))?;
            img.push(idx);
        }
        Ok(FinSetMap { src, tgt, img })
    }

    pub fn from_indices(src: FinSetObj, tgt: FinSetObj, img: Vec<usize>) -> Result<Self> {
        if img.len() != src.len() || img.iter().any(|&i| i >= tgt.len()) {
            return Err(HocatError::Malformed("map indices out of range".into()));
        }
        Ok(FinSetMap { src, tgt, img })
    }

    pub fn identity(a: &FinSetObj) -> Self {
        FinSetMap { src: a.clone(), tgt: a.clone(), img: (0..a.len()).collect() }
    }

    pub fn apply(&self, i: usize) -> usize {
        self.img[i]
    }

    pub fn apply_name(&self, name: &str) -> Option<&str> {
        let i = self.src.index_of(name)?;
        Some(&self.tgt.elements()[self.img[i]])
    }

    pub fn compose(&self, first: &FinSetMap) -> FinSetMap {
        assert_eq!(first.tgt, self.src, "composition mismatch");
        FinSetMap {
            src: first.src.clone(),
            tgt: self.tgt.clone(),
            img: first.img.iter().map(|&i| self.img[i]).collect(),
        }
    }

    pub fn is_injective(&self) -> bool {
        let mut seen = vec![false; self.tgt.len()];
        for &i in &self.img {
            if seen[i] {
                return false;
            }
            seen[i] = true;
        }
        true
    }

    pub fn is_surjective(&self) -> bool {
        let mut seen = vec![false; self.tgt.len()];
        for &i in &self.img {
            seen[i] = true;
        }
        seen.into_iter().all(|b| b)
    }

    pub fn is_bijective(&self) -> bool {
        self.src.len() == self.tgt.len() && self.is_injective()
    }
}

/// `(isCofibration, isWeakEquivalence, isFibration)` =
/// (injective, bijective, surjective).
pub fn set_model_predicates(f: &FinSetMap) -> (bool, bool, bool) {
    (f.is_injective(), f.is_bijective(), f.is_surjective())
}

/// Deterministic union-find over `0..n` whose class representative is the
/// smallest member under a caller-supplied priority order.
#[derive(Debug, Clone)]
pub struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    pub fn new(n: usize) -> Self {
        UnionFind { parent: (0..n).collect() }
    }

    pub fn find(&mut self, mut i: usize) -> usize {
        while self.parent[i] != i {
            self.parent[i] = self.parent[self.parent[i]];
            i = self.parent[i];
        }
        i
    }

    pub fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            // keep the smaller index as representative
            let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
            self.parent[hi] = lo;
        }
    }

    /// Classes keyed by representative index, members sorted.
    pub fn classes(&mut self) -> BTreeMap<usize, Vec<usize>> {
        let n = self.parent.len();
        let mut out: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for i in 0..n {
            let r = self.find(i);
            out.entry(r).or_default().push(i);
        }
        out
    }
}

// --- JSON ------------------------------------------------------------------
//
// {"elements": ["a", "b"]}; maps as {"a": "x", ...}

pub fn finset_to_json(s: &FinSetObj) -> Value {
    json!({"elements": s.elements().to_vec()})
}

pub fn finset_from_json(v: &Value) -> Result<FinSetObj> {
    let obj = v.as_object().ok_or_else(|| HocatError::Malformed("finite set must be an object".into()))?;
    let arr = obj
        .get("elements")
        .and_then(|e| e.as_array())
        .ok_or_else(|| HocatError::Malformed("finite set needs an elements array".into()))?;
    let mut elems = Vec::new();
    for e in arr {
        elems.push(
            e.as_str()
                .ok_or_else(|| HocatError::Malformed("elements must be strings".into()))?
                .to_string(),
        );
    }
    FinSetObj::new(elems)
}

pub fn finsetmap_to_json(f: &FinSetMap) -> Value {
    let mut m = JsonMap::new();
    for (i, e) in f.src.elements().iter().enumerate() {
        m.insert(e.clone(), json!(f.tgt.elements()[f.apply(i)].clone()));
    }
    Value::Object(m)
}

pub fn finsetmap_from_json(src: FinSetObj, tgt: FinSetObj, v: &Value) -> Result<FinSetMap> {
    let obj = v.as_object().ok_or_else(|| HocatError::Malformed("map must be an object".into()))?;
    let mut assignment = BTreeMap::new();
    for (k, val) in obj {
        let t = val
            .as_str()
            .ok_or_else(|| HocatError::Malformed("map values must be strings".into()))?;
        assignment.insert(k.clone(), t.to_string());
    }
    FinSetMap::new(src, tgt, &assignment)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(names: &[&str]) -> FinSetObj {
        FinSetObj::new(names.iter().map(|s| s.to_string()).collect()).unwrap()
    }

    #[test]
    fn predicate_examples() {
        let ab = set(&["a", "b"]);
        assert_eq!(set_model_predicates(&FinSetMap::identity(&ab)), (true, true, true));
        let a = set(&["a"]);
        let incl = FinSetMap::new(a.clone(), ab.clone(), &[("a", "a")].iter().map(|&(k, v)| (k.to_string(), v.to_string())).collect()).unwrap();
        assert_eq!(set_model_predicates(&incl), (true, false, false));
        let squash = FinSetMap::new(ab, a, &[("a", "a"), ("b", "a")].iter().map(|&(k, v)| (k.to_string(), v.to_string())).collect()).unwrap();
        assert_eq!(set_model_predicates(&squash), (false, false, true));
    }

    #[test]
    fn union_find_picks_least_representative() {
        let mut uf = UnionFind::new(4);
        uf.union(3, 1);
        uf.union(1, 2);
        let classes = uf.classes();
        assert_eq!(classes.len(), 2);
        assert!(classes.contains_key(&0));
        assert_eq!(classes[&1], vec![1, 2, 3]);
    }

    #[test]
    fn json_round_trip() {
        let s = set(&["b", "a"]);
        let v = finset_to_json(&s);
        assert_eq!(finset_from_json(&v).unwrap(), s);
        let f = FinSetMap::identity(&s);
        let fv = finsetmap_to_json(&f);
        assert_eq!(finsetmap_from_json(s.clone(), s, &fv).unwrap(), f);
    }

    #[test]
    fn duplicates_rejected() {
        assert!(FinSetObj::new(vec!["a".into(), "a".into()]).is_err());
    }
}
