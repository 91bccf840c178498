//! Free-group words over a named alphabet, group presentations and
//! generator substitution maps.
//!
//! Every [`Word`] carries a shared handle to the [`Alphabet`] it was built
//! over. Mixing words from different alphabets is an error, never a silent
//! reinterpretation of generator ids.

use alloc::string::{String, ToString};
use alloc::sync::Arc;
use alloc::vec::Vec;
use core::fmt;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum WordError {
    #[error("generator id {0} is not in the alphabet")]
    UnknownGeneratorId(usize),
    #[error("unknown generator name {0:?}")]
    UnknownGeneratorName(String),
    #[error("duplicate generator name {0:?}")]
    DuplicateName(String),
    #[error("malformed exponent in {0:?}")]
    BadExponent(String),
    #[error("words are over different alphabets")]
    AlphabetMismatch,
    #[error("no image given for generator {0:?}")]
    MissingImage(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GeneratorSymbol {
    pub id: usize,
    pub name: String,
}

/// An ordered set of generator symbols. Ids are positions.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Alphabet {
    symbols: Vec<GeneratorSymbol>,
}

impl Alphabet {
    pub fn new<S: AsRef<str>>(names: &[S]) -> Result<Arc<Self>, WordError> {
        let mut symbols: Vec<GeneratorSymbol> = Vec::with_capacity(names.len());
        for (id, name) in names.iter().enumerate() {
            let name = name.as_ref();
            if symbols.iter().any(|s| s.name == name) {
                return Err(WordError::DuplicateName(name.to_string()));
            }
            symbols.push(GeneratorSymbol {
                id,
                name: name.to_string(),
            });
        }
        Ok(Arc::new(Alphabet { symbols }))
    }

    /// Alphabet `prefix1, prefix2, ..., prefix{n}`.
    pub fn numbered(prefix: &str, n: usize) -> Arc<Self> {
        let names: Vec<String> = (1..=n).map(|i| alloc::format!("{prefix}{i}")).collect();
        Self::new(&names).expect("numbered names are distinct")
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn symbols(&self) -> &[GeneratorSymbol] {
        &self.symbols
    }

    pub fn symbol(&self, id: usize) -> Option<&GeneratorSymbol> {
        self.symbols.get(id)
    }

    pub fn name(&self, id: usize) -> &str {
        &self.symbols[id].name
    }

    pub fn id_of(&self, name: &str) -> Option<usize> {
        self.symbols.iter().position(|s| s.name == name)
    }

    /// Parses the whitespace-separated text form, e.g. `alpha1 alpha2^-1 gamma^3`.
    /// The empty string is the identity.
    pub fn parse_word(self: &Arc<Self>, text: &str) -> Result<Word, WordError> {
        let mut raw = Vec::new();
        for token in text.split_whitespace() {
            let (name, exp) = match token.split_once('^') {
                Some((name, exp)) => {
                    let e: i64 = exp
                        .parse()
                        .map_err(|_| WordError::BadExponent(token.to_string()))?;
                    if e == 0 {
                        return Err(WordError::BadExponent(token.to_string()));
                    }
                    (name, e)
                }
                None => (token, 1),
            };
            let id = self
                .id_of(name)
                .ok_or_else(|| WordError::UnknownGeneratorName(name.to_string()))?;
            let letter = Letter {
                generator: id,
                inverse: exp < 0,
            };
            for _ in 0..exp.unsigned_abs() {
                raw.push(letter);
            }
        }
        Word::reduce(self, raw)
    }
}

fn same_alphabet(a: &Arc<Alphabet>, b: &Arc<Alphabet>) -> bool {
    Arc::ptr_eq(a, b) || a == b
}

/// A generator or its inverse.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Letter {
    pub generator: usize,
    pub inverse: bool,
}

impl Letter {
    pub fn new(generator: usize, inverse: bool) -> Self {
        Letter { generator, inverse }
    }

    pub fn inv(self) -> Self {
        Letter {
            generator: self.generator,
            inverse: !self.inverse,
        }
    }

    pub fn sign(self) -> i64 {
        if self.inverse {
            -1
        } else {
            1
        }
    }
}

/// A freely reduced word. The empty word is the identity.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Word {
    alphabet: Arc<Alphabet>,
    letters: Vec<Letter>,
}

impl Word {
    pub fn identity(alphabet: &Arc<Alphabet>) -> Self {
        Word {
            alphabet: alphabet.clone(),
            letters: Vec::new(),
        }
    }

    pub fn generator(alphabet: &Arc<Alphabet>, id: usize) -> Result<Self, WordError> {
        Self::reduce(alphabet, [Letter::new(id, false)])
    }

    /// Freely reduces a raw letter sequence.
    pub fn reduce<I>(alphabet: &Arc<Alphabet>, raw: I) -> Result<Self, WordError>
    where
        I: IntoIterator<Item = Letter>,
    {
        let mut letters: Vec<Letter> = Vec::new();
        for l in raw {
            if l.generator >= alphabet.len() {
                return Err(WordError::UnknownGeneratorId(l.generator));
            }
            push_reduced(&mut letters, l);
        }
        Ok(Word {
            alphabet: alphabet.clone(),
            letters,
        })
    }

    pub fn alphabet(&self) -> &Arc<Alphabet> {
        &self.alphabet
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_identity(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn multiply(&self, other: &Word) -> Result<Word, WordError> {
        if !same_alphabet(&self.alphabet, &other.alphabet) {
            return Err(WordError::AlphabetMismatch);
        }
        let mut letters = self.letters.clone();
        for &l in &other.letters {
            push_reduced(&mut letters, l);
        }
        Ok(Word {
            alphabet: self.alphabet.clone(),
            letters,
        })
    }

    pub fn inverse(&self) -> Word {
        Word {
            alphabet: self.alphabet.clone(),
            letters: self.letters.iter().rev().map(|l| l.inv()).collect(),
        }
    }

    /// Applies a generator substitution. The result is a word over the map's
    /// target alphabet.
    pub fn substitute(&self, map: &InclusionMap) -> Result<Word, WordError> {
        if !same_alphabet(&self.alphabet, &map.source) {
            return Err(WordError::AlphabetMismatch);
        }
        let mut letters: Vec<Letter> = Vec::new();
        for l in &self.letters {
            let image = &map.images[l.generator];
            if l.inverse {
                for &m in image.letters.iter().rev() {
                    push_reduced(&mut letters, m.inv());
                }
            } else {
                for &m in &image.letters {
                    push_reduced(&mut letters, m);
                }
            }
        }
        Ok(Word {
            alphabet: map.target.clone(),
            letters,
        })
    }

    /// Signed number of occurrences of generator `id`.
    pub fn exponent_sum(&self, id: usize) -> i64 {
        self.letters
            .iter()
            .filter(|l| l.generator == id)
            .map(|l| l.sign())
            .sum()
    }

    /// Exponent sums of every generator, in alphabet order.
    pub fn exponent_vector(&self) -> Vec<i64> {
        let mut v = alloc::vec![0i64; self.alphabet.len()];
        for l in &self.letters {
            v[l.generator] += l.sign();
        }
        v
    }

    /// Moves the word onto an equal alphabet held by another handle.
    pub fn rebase(&self, alphabet: &Arc<Alphabet>) -> Result<Word, WordError> {
        if !same_alphabet(&self.alphabet, alphabet) {
            return Err(WordError::AlphabetMismatch);
        }
        Ok(Word {
            alphabet: alphabet.clone(),
            letters: self.letters.clone(),
        })
    }
}

fn push_reduced(letters: &mut Vec<Letter>, l: Letter) {
    if letters.last() == Some(&l.inv()) {
        letters.pop();
    } else {
        letters.push(l);
    }
}

impl fmt::Display for Word {
    /// Text form with run-length exponents, e.g. `alpha1^2 gamma^-1`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut i = 0;
        let mut first = true;
        while i < self.letters.len() {
            let l = self.letters[i];
            let mut run = 1;
            while i + run < self.letters.len() && self.letters[i + run] == l {
                run += 1;
            }
            if !first {
                f.write_str(" ")?;
            }
            first = false;
            f.write_str(self.alphabet.name(l.generator))?;
            match (l.inverse, run) {
                (false, 1) => {}
                (true, 1) => f.write_str("^-1")?,
                (false, n) => write!(f, "^{n}")?,
                (true, n) => write!(f, "^-{n}")?,
            }
            i += run;
        }
        Ok(())
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Word({self})")
    }
}

/// Generators and relators of a finitely presented group.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Presentation {
    alphabet: Arc<Alphabet>,
    relators: Vec<Word>,
}

impl Presentation {
    pub fn new(alphabet: Arc<Alphabet>, relators: Vec<Word>) -> Result<Self, WordError> {
        let relators = relators
            .into_iter()
            .map(|r| r.rebase(&alphabet))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Presentation { alphabet, relators })
    }

    pub fn free(alphabet: Arc<Alphabet>) -> Self {
        Presentation {
            alphabet,
            relators: Vec::new(),
        }
    }

    /// Builds a presentation from generator names and relators in text form.
    pub fn parse<S: AsRef<str>, R: AsRef<str>>(
        generators: &[S],
        relators: &[R],
    ) -> Result<Self, WordError> {
        let alphabet = Alphabet::new(generators)?;
        let relators = relators
            .iter()
            .map(|r| alphabet.parse_word(r.as_ref()))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Presentation { alphabet, relators })
    }

    pub fn alphabet(&self) -> &Arc<Alphabet> {
        &self.alphabet
    }

    pub fn relators(&self) -> &[Word] {
        &self.relators
    }

    pub fn generator_count(&self) -> usize {
        self.alphabet.len()
    }

    pub fn is_free(&self) -> bool {
        self.relators.iter().all(Word::is_identity)
    }
}

/// A homomorphism between free groups given by generator images; used for the
/// map induced on fundamental groups by an inclusion of spaces.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InclusionMap {
    source: Arc<Alphabet>,
    target: Arc<Alphabet>,
    images: Vec<Word>,
}

impl InclusionMap {
    pub fn new(
        source: Arc<Alphabet>,
        target: Arc<Alphabet>,
        images: Vec<Word>,
    ) -> Result<Self, WordError> {
        if images.len() != source.len() {
            let missing = source
                .symbols()
                .get(images.len())
                .map(|s| s.name.clone())
                .unwrap_or_default();
            return Err(WordError::MissingImage(missing));
        }
        let images = images
            .into_iter()
            .map(|w| w.rebase(&target))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(InclusionMap {
            source,
            target,
            images,
        })
    }

    /// Builds a map from `(source name, image text)` pairs; every source
    /// generator needs an image.
    pub fn parse<S: AsRef<str>, T: AsRef<str>>(
        source: &Arc<Alphabet>,
        target: &Arc<Alphabet>,
        pairs: &[(S, T)],
    ) -> Result<Self, WordError> {
        let mut images: Vec<Option<Word>> = alloc::vec![None; source.len()];
        for (name, image) in pairs {
            let id = source
                .id_of(name.as_ref())
                .ok_or_else(|| WordError::UnknownGeneratorName(name.as_ref().to_string()))?;
            images[id] = Some(target.parse_word(image.as_ref())?);
        }
        let images = images
            .into_iter()
            .enumerate()
            .map(|(id, w)| w.ok_or_else(|| WordError::MissingImage(source.name(id).to_string())))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(InclusionMap {
            source: source.clone(),
            target: target.clone(),
            images,
        })
    }

    pub fn identity(alphabet: &Arc<Alphabet>) -> Self {
        let images = (0..alphabet.len())
            .map(|i| Word::generator(alphabet, i).expect("id in range"))
            .collect();
        InclusionMap {
            source: alphabet.clone(),
            target: alphabet.clone(),
            images,
        }
    }

    pub fn source(&self) -> &Arc<Alphabet> {
        &self.source
    }

    pub fn target(&self) -> &Arc<Alphabet> {
        &self.target
    }

    pub fn images(&self) -> &[Word] {
        &self.images
    }

    pub fn image(&self, id: usize) -> &Word {
        &self.images[id]
    }
}
