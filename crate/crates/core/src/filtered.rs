//! Demand-driven stage materialization. A filtered object is a based object
//! together with the deterministic rule that produced it; extending re-runs
//! the rule at the larger bound and verifies bit-exact agreement with the
//! already materialized stages.

use crate::config::EngineConfig;
use crate::error::{HocatError, Result};
use crate::graded::{GMor, GObj};
use std::sync::Arc;

pub type Recipe = Arc<dyn Fn(u32) -> Result<GObj> + Send + Sync>;

#[derive(Clone)]
pub struct Filtered {
    obj: GObj,
    stage: u32,
    recipe: Recipe,
}

impl std::fmt::Debug for Filtered {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Filtered")
            .field("stage", &self.stage)
            .field("size", &self.obj.len())
            .finish()
    }
}

impl Filtered {
    /// Materializes the recipe at the given stage. Every bond (stage
    /// inclusion) of the result is a cofibration by construction; this is
    /// re-checked here.
    pub fn materialize(recipe: Recipe, stage: u32, cfg: &EngineConfig) -> Result<Self> {
        let obj = recipe(stage)?;
        check_budget(&obj, cfg)?;
        for p in 0..stage {
            let (_, bond) = obj.truncate(p);
            if !bond.is_cofibration() {
                return Err(HocatError::Internal(format!("stage bond at {} is not a cofibration", p)));
            }
        }
        Ok(Filtered { obj, stage, recipe })
    }

    /// Constant filtered object: every stage is `obj`, bonds are identities.
    pub fn constant(obj: GObj, stage: u32) -> Self {
        let base = obj.clone();
        Filtered {
            obj: base.clone(),
            stage,
            recipe: Arc::new(move |_| Ok(base.clone())),
        }
    }

    pub fn stage(&self) -> u32 {
        self.stage
    }

    pub fn object(&self) -> &GObj {
        &self.obj
    }

    /// Stage-`p` slice with its inclusion into the materialized object.
    pub fn stage_object(&self, p: u32) -> (GObj, GMor) {
        self.obj.truncate(p.min(self.stage))
    }

    /// Materializes all stages up to `p`. Stages already computed must come
    /// back bit-exact; anything else is an internal determinism failure.
    pub fn extend(&mut self, p: u32, cfg: &EngineConfig) -> Result<()> {
        if p <= self.stage {
            return Ok(());
        }
        let bigger = (self.recipe)(p)?;
        check_budget(&bigger, cfg)?;
        let (old_slice, _) = bigger.truncate(self.stage);
        let (expect, _) = self.obj.truncate(self.stage);
        if old_slice != expect {
            return Err(HocatError::Internal(
                "re-extension changed previously computed stages".into(),
            ));
        }
        self.obj = bigger;
        self.stage = p;
        Ok(())
    }
}

pub fn check_budget(obj: &GObj, cfg: &EngineConfig) -> Result<()> {
    if obj.len() > cfg.budget {
        return Err(HocatError::Budget { size: obj.len(), budget: cfg.budget });
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graded::{BaseKind, BasisElt};

    fn free_words_recipe() -> Recipe {
        // free monoid on one weight-1 generator: stage p has words up to length p
        Arc::new(|p: u32| {
            let basis = (0..=p)
                .map(|k| BasisElt {
                    degree: 0,
                    weight: k,
                    word: (0..k).map(|_| (0u32, 0u32)).collect(),
                })
                .collect();
            GObj::new(BaseKind::ChainQ, basis, Vec::new())
        })
    }

    #[test]
    fn constant_filtration_has_identity_bonds() {
        let cfg = EngineConfig::default();
        let f = Filtered::materialize(
            Arc::new(|_| Ok(GObj::unit_obj(BaseKind::ChainQ))),
            5,
            &cfg,
        )
        .unwrap();
        for p in 0..=5 {
            let (s, _) = f.stage_object(p);
            assert_eq!(s.len(), 1);
        }
    }

    #[test]
    fn free_monoid_stage_dims() {
        // one rank-1 degree-0 generator: stage dims (1,2,3,4) cumulative
        let cfg = EngineConfig::default();
        let f = Filtered::materialize(free_words_recipe(), 3, &cfg).unwrap();
        for p in 0..=3 {
            assert_eq!(f.stage_object(p).0.len(), (p + 1) as usize);
        }
    }

    #[test]
    fn extend_is_idempotent_below_current_stage() {
        let cfg = EngineConfig::default();
        let mut f = Filtered::materialize(free_words_recipe(), 3, &cfg).unwrap();
        let before = f.object().clone();
        f.extend(2, &cfg).unwrap();
        assert_eq!(f.object(), &before);
        f.extend(5, &cfg).unwrap();
        assert_eq!(f.stage(), 5);
        assert_eq!(f.object().truncate(3).0, before);
    }

    #[test]
    fn budget_is_enforced() {
        let cfg = EngineConfig { budget: 3, ..EngineConfig::default() };
        let err = Filtered::materialize(free_words_recipe(), 10, &cfg);
        assert!(matches!(err, Err(HocatError::Budget { .. })));
    }
}
