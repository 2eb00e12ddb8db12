use rand::seq::SliceRandom;
use rand::Rng;

use crate::logic::{Formula, Var, ALPHABET};

/// A bijection on the 26 variables.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct VarPermutation([u8; ALPHABET]);

impl VarPermutation {
    pub fn identity() -> Self {
        let mut map = [0u8; ALPHABET];
        for (i, slot) in map.iter_mut().enumerate() {
            *slot = i as u8;
        }
        VarPermutation(map)
    }

    /// Builds a permutation from an image table; `None` unless bijective.
    pub fn from_images(images: [u8; ALPHABET]) -> Option<Self> {
        let mut seen = 0u32;
        for &img in &images {
            if img as usize >= ALPHABET || seen & (1 << img) != 0 {
                return None;
            }
            seen |= 1 << img;
        }
        Some(VarPermutation(images))
    }

    pub fn random<R: Rng + ?Sized>(rng: &mut R) -> Self {
        let mut p = Self::identity();
        p.0.shuffle(rng);
        p
    }

    /// Composes with the transposition of `a` and `b` on the image side.
    pub fn swap(mut self, a: Var, b: Var) -> Self {
        let ia = self
            .0
            .iter()
            .position(|&x| x as usize == a.index())
            .unwrap();
        let ib = self
            .0
            .iter()
            .position(|&x| x as usize == b.index())
            .unwrap();
        self.0.swap(ia, ib);
        self
    }

    pub fn apply(&self, v: Var) -> Var {
        Var::new(self.0[v.index()] as usize).unwrap()
    }

    pub fn inverse(&self) -> Self {
        let mut inv = [0u8; ALPHABET];
        for (i, &img) in self.0.iter().enumerate() {
            inv[img as usize] = i as u8;
        }
        VarPermutation(inv)
    }

    pub fn images(&self) -> &[u8; ALPHABET] {
        &self.0
    }
}

pub fn apply_permutation(f: &Formula, perm: &VarPermutation) -> Formula {
    f.map_vars(&|v| perm.apply(v))
}
