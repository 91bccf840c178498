//! Permutation representations of finitely presented groups.

use alloc::vec::Vec;

use crate::perm::{self, PermError, Permutation};
use crate::word::{Presentation, Word, WordError};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum RepError {
    #[error("degree must be at least 1")]
    ZeroDegree,
    #[error("expected {expected} generator images, got {got}")]
    ImageCount { expected: usize, got: usize },
    #[error("image of generator {0} has the wrong degree")]
    ImageDegree(usize),
    #[error("relator {0} does not act trivially")]
    RelatorViolated(alloc::string::String),
    #[error(transparent)]
    Word(#[from] WordError),
    #[error(transparent)]
    Perm(#[from] PermError),
}

/// A homomorphism from a presented group to `S_b`, given by generator
/// images. Every relator acts as the identity.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MonodromyRep {
    presentation: Presentation,
    degree: usize,
    images: Vec<Permutation>,
    inverses: Vec<Permutation>,
}

impl MonodromyRep {
    pub fn new(
        presentation: Presentation,
        images: Vec<Permutation>,
    ) -> Result<Self, RepError> {
        let expected = presentation.generator_count();
        if images.len() != expected {
            return Err(RepError::ImageCount {
                expected,
                got: images.len(),
            });
        }
        let degree = match images.first() {
            Some(p) => p.degree(),
            None => return Err(RepError::ZeroDegree),
        };
        Self::with_degree(presentation, degree, images)
    }

    /// Like [`MonodromyRep::new`] but also valid for groups without
    /// generators, where the degree cannot be read off the images.
    pub fn with_degree(
        presentation: Presentation,
        degree: usize,
        images: Vec<Permutation>,
    ) -> Result<Self, RepError> {
        if degree == 0 {
            return Err(RepError::ZeroDegree);
        }
        let expected = presentation.generator_count();
        if images.len() != expected {
            return Err(RepError::ImageCount {
                expected,
                got: images.len(),
            });
        }
        if let Some(i) = images.iter().position(|p| p.degree() != degree) {
            return Err(RepError::ImageDegree(i));
        }
        let inverses = images.iter().map(Permutation::inverse).collect();
        let rep = MonodromyRep {
            presentation,
            degree,
            images,
            inverses,
        };
        for r in rep.presentation.relators() {
            if !rep.image(r)?.is_identity() {
                return Err(RepError::RelatorViolated(alloc::format!("{r}")));
            }
        }
        Ok(rep)
    }

    /// The degree-1 representation.
    pub fn trivial(presentation: Presentation) -> Self {
        let images = (0..presentation.generator_count())
            .map(|_| Permutation::identity(1))
            .collect::<Vec<_>>();
        MonodromyRep {
            presentation,
            degree: 1,
            inverses: images.clone(),
            images,
        }
    }

    pub fn presentation(&self) -> &Presentation {
        &self.presentation
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn images(&self) -> &[Permutation] {
        &self.images
    }

    pub fn generator_image(&self, id: usize) -> &Permutation {
        &self.images[id]
    }

    pub fn generator_inverse(&self, id: usize) -> &Permutation {
        &self.inverses[id]
    }

    /// Image of a word: the permutation of sheets produced by lifting the loop.
    pub fn image(&self, w: &Word) -> Result<Permutation, RepError> {
        if w.alphabet() != self.presentation.alphabet() {
            return Err(WordError::AlphabetMismatch.into());
        }
        let mut images: Vec<usize> = (0..self.degree).collect();
        for x in images.iter_mut() {
            *x = self.trace(*x, w);
        }
        Ok(Permutation::new(images)?)
    }

    /// End sheet of the lift of `w` starting at `sheet`.
    pub fn trace(&self, sheet: usize, w: &Word) -> usize {
        let mut s = sheet;
        for l in w.letters() {
            s = if l.inverse {
                self.inverses[l.generator].apply(s)
            } else {
                self.images[l.generator].apply(s)
            };
        }
        s
    }

    pub fn is_transitive(&self) -> bool {
        perm::is_transitive(self.degree, &self.images).expect("degrees checked")
    }
}
