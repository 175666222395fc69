//! Two copies meeting exactly in 𝔞𝔠(F), built jointly.

use super::staged::{Guard, Staged};
use super::{Base, ClosedForm, CopyHandle};
use crate::error::{Error, Result};
use crate::point::{FiniteSet, Point};
use crate::structures::{Shared, Structure};

#[derive(Clone, Debug)]
pub struct DisjointPair {
    s: Shared,
    c: CopyHandle,
    d: CopyHandle,
    base: FiniteSet,
    joint: bool,
    round: usize,
}

/// Copies C, D with C ∩ D = 𝔞𝔠(F). Both sides fix 𝔞𝔠(F) and grow in
/// alternation; every new image keeps the two closures apart outside
/// 𝔞𝔠(F), and round n settles u_n on at least one side.
pub fn disjoint_pair(s: &Shared, f: &FiniteSet, seed: u64) -> Result<DisjointPair> {
    let sd = s.as_ref();
    let caps = sd.capabilities();
    if !caps.algebraically_finite {
        return Err(Error::Unsupported(format!(
            "{} is not certified algebraically finite",
            sd.id()
        )));
    }
    let base = sd
        .algebraic_closure_exact(f)
        .ok_or_else(|| Error::Unsupported(format!("{} cannot compute algebraic closures", sd.id())))?;
    if !caps.explicit_maps {
        if sd.id() != "rado" {
            return Err(Error::Unsupported(format!(
                "no closed-form disjoint pair for {}",
                sd.id()
            )));
        }
        let side = |parity: u32, name: &str| {
            let mut form = ClosedForm::new(Base::RadoParity(parity));
            form.plus = base.clone();
            CopyHandle::closed(s, name.to_string(), form)
        };
        return Ok(DisjointPair {
            s: s.clone(),
            c: side(0, "disjoint-C"),
            d: side(1, "disjoint-D"),
            base,
            joint: false,
            round: 0,
        });
    }
    let side = |name: &str, sd: u64| {
        let mut st = Staged::new(base.clone(), FiniteSet::new(), None, false, false, sd);
        st.guard = Some(Guard {
            base: base.clone(),
            foreign: FiniteSet::new(),
        });
        CopyHandle::staged(s, name.to_string(), sd, st)
    };
    Ok(DisjointPair {
        s: s.clone(),
        c: side("disjoint-C", seed),
        d: side("disjoint-D", seed.wrapping_add(1)),
        base,
        joint: true,
        round: 0,
    })
}

fn closure(s: &dyn Structure, set: &FiniteSet) -> Result<FiniteSet> {
    s.algebraic_closure_exact(set)
        .ok_or_else(|| Error::Contract("algebraic closure became unavailable".into()))
}

impl DisjointPair {
    pub fn base(&self) -> &FiniteSet {
        &self.base
    }

    pub fn round(&self) -> usize {
        self.round
    }

    /// Snapshots of both sides. They cannot be advanced on their own.
    pub fn handles(&self) -> (CopyHandle, CopyHandle) {
        (self.c.clone().seal(), self.d.clone().seal())
    }

    pub fn advance(&mut self, rounds: usize) -> Result<()> {
        for _ in 0..rounds {
            if self.joint {
                self.step()?;
            }
            self.c.bump_stage();
            self.d.bump_stage();
            self.round += 1;
        }
        Ok(())
    }

    fn step(&mut self) -> Result<()> {
        let s = self.s.clone();
        let sd = s.as_ref();
        let n = self.round;
        let u = Point(n as u64);
        let (range_c, range_d) = self.ranges();
        if !self.base.contains(u) {
            let put_out_of_c = if range_c.contains(u) {
                false
            } else {
                range_d.contains(u) || !closure(sd, &range_c)?.contains(u)
            };
            let side = if put_out_of_c { &mut self.c } else { &mut self.d };
            side.staged_mut().expect("joint sides are staged").out.insert(u);
        }
        let foreign = closure(sd, &range_d)?;
        let st = self.c.staged_mut().expect("joint sides are staged");
        st.guard.as_mut().expect("joint sides carry a guard").foreign = foreign;
        st.forth(sd, n)?;
        let (range_c, _) = self.ranges();
        let foreign = closure(sd, &range_c)?;
        let st = self.d.staged_mut().expect("joint sides are staged");
        st.guard.as_mut().expect("joint sides carry a guard").foreign = foreign;
        st.forth(sd, n)
    }

    fn ranges(&self) -> (FiniteSet, FiniteSet) {
        let r = |h: &CopyHandle| h.staged_ref().map(|st| st.map.range()).unwrap_or_default();
        (r(&self.c), r(&self.d))
    }
}
