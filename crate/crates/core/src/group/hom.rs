//! Homomorphisms from a free group to `S_n`, and order profiles.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::perm::{Perm, PermError};
use super::word::{generator_of, FreeWord};
use super::MarkedPresentation;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum HomError {
    #[error("generator {generator} out of range (hom has {count})")]
    GeneratorOutOfRange { generator: usize, count: usize },
    #[error("generator {generator}: {source}")]
    Image { generator: usize, source: PermError },
    #[error("image of generator {generator} has degree {found}, expected {degree}")]
    Degree { generator: usize, found: usize, degree: usize },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Hom {
    degree: usize,
    images: Vec<Perm>,
}

/// File form: one cycle-notation string per generator.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HomFile {
    pub degree: usize,
    pub generators: Vec<String>,
}

impl Hom {
    pub fn new(degree: usize, images: Vec<Perm>) -> Result<Hom, HomError> {
        for (generator, p) in images.iter().enumerate() {
            if p.degree() != degree {
                return Err(HomError::Degree {
                    generator,
                    found: p.degree(),
                    degree,
                });
            }
        }
        Ok(Hom { degree, images })
    }

    pub fn trivial(degree: usize, generators: usize) -> Hom {
        Hom {
            degree,
            images: vec![Perm::identity(degree); generators],
        }
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn images(&self) -> &[Perm] {
        &self.images
    }

    pub fn to_file(&self) -> HomFile {
        HomFile {
            degree: self.degree,
            generators: self.images.iter().map(Perm::cycle_notation).collect(),
        }
    }

    pub fn from_file(f: &HomFile) -> Result<Hom, HomError> {
        let images = f
            .generators
            .iter()
            .enumerate()
            .map(|(generator, s)| Perm::parse_cycles(f.degree, s).map_err(|source| HomError::Image { generator, source }))
            .collect::<Result<Vec<_>, _>>()?;
        Hom::new(f.degree, images)
    }
}

/// Image of `w`, letters applied left to right.
pub fn evaluate(h: &Hom, w: &FreeWord) -> Result<Perm, HomError> {
    let count = h.images.len();
    if let Some(generator) = w.max_generator().filter(|&g| g >= count) {
        return Err(HomError::GeneratorOutOfRange { generator, count });
    }
    let inverses: Vec<Perm> = h.images.iter().map(Perm::inverse).collect();
    let mut cur: Vec<u32> = (0..h.degree as u32).collect();
    for &l in w.letters() {
        let g = generator_of(l);
        let p = if l > 0 { &h.images[g] } else { &inverses[g] };
        for x in cur.iter_mut() {
            *x = p.apply(*x);
        }
    }
    Ok(Perm::from_images(cur).expect("composite of bijections"))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrderProfile {
    /// Order of the image of each relator's base word.
    pub orders: Vec<u64>,
    /// Image of `r` (or of `r^p` when flagged) is the identity.
    pub satisfied: Vec<bool>,
    /// `(level, order)` for each branch relator.
    pub branch_orders: Vec<(u32, u64)>,
    /// Branch levels whose relator image has order exactly `p`.
    pub o_set: BTreeSet<u32>,
}

impl OrderProfile {
    pub fn all_satisfied(&self) -> bool {
        self.satisfied.iter().all(|&s| s)
    }
}

pub fn order_profile(pres: &MarkedPresentation, h: &Hom) -> Result<OrderProfile, HomError> {
    let p = pres.p as u64;
    let mut orders = Vec::with_capacity(pres.relators.len());
    let mut satisfied = Vec::with_capacity(pres.relators.len());
    let mut branch_orders = Vec::new();
    let mut o_set = BTreeSet::new();
    for r in &pres.relators {
        let order = evaluate(h, &r.word)?.order();
        let ok = if r.power { p.is_multiple_of(order) } else { order == 1 };
        if r.power && ok {
            // o(ϕ(r)) | p with p prime.
            assert!(order == 1 || order == p, "flagged relator of order {order} with p = {p}");
        }
        if let Some(level) = r.branch {
            branch_orders.push((level, order));
            if order == p {
                o_set.insert(level);
            }
        }
        orders.push(order);
        satisfied.push(ok);
    }
    Ok(OrderProfile {
        orders,
        satisfied,
        branch_orders,
        o_set,
    })
}
