//! Reduced words over an amalgamated family of factor categories.
//!
//! Factors are indexed from 0 internally and from 1 in the literal syntax
//! (`[std@1][g@2]`). 0-cells of the amalgam are the glued classes of factor
//! 0-cells, each named after its representative in the smallest factor.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::ops::Deref;

use crate::error::{Error, Result};
use crate::fusion::{CategorySpec, IrrId, ZeroCell};
use crate::scalar::Scalar;

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Letter {
    pub factor: usize,
    pub irr: IrrId,
}

impl Letter {
    pub fn new(factor: usize, irr: IrrId) -> Self {
        Letter { factor, irr }
    }
}

impl fmt::Debug for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}@{}]", self.irr.label(), self.factor + 1)
    }
}

/// A composable sequence of letters; units and same-factor neighbours allowed.
///
/// `cells[k]` is the glued 0-cell in front of letter `k`, so a word with `n`
/// letters carries `n + 1` cells, the first and last being its endpoints.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Word {
    letters: Vec<Letter>,
    cells: Vec<ZeroCell>,
}

impl Word {
    pub fn empty(cell: ZeroCell) -> Self {
        Word { letters: Vec::new(), cells: vec![cell] }
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn source(&self) -> &ZeroCell {
        &self.cells[0]
    }

    pub fn target(&self) -> &ZeroCell {
        self.cells.last().expect("a word has at least one cell")
    }

    /// The glued 0-cells between letters, endpoints included.
    pub fn cells(&self) -> &[ZeroCell] {
        &self.cells
    }

    pub fn first_factor(&self) -> Option<usize> {
        self.letters.first().map(|l| l.factor)
    }

    pub fn last_factor(&self) -> Option<usize> {
        self.letters.last().map(|l| l.factor)
    }

    /// Subword of letters `range`, keeping the glued cells consistent.
    pub fn slice(&self, start: usize, end: usize) -> Word {
        Word { letters: self.letters[start..end].to_vec(), cells: self.cells[start..=end].to_vec() }
    }

    /// Concatenation; fails unless the inner endpoints agree.
    pub fn concat(&self, other: &Word) -> Result<Word> {
        if self.target() != other.source() {
            return Err(Error::Composition(format!(
                "{self} ends at {} but {other} starts at {}",
                self.target(),
                other.source()
            )));
        }
        let mut letters = self.letters.clone();
        letters.extend(other.letters.iter().cloned());
        let mut cells = self.cells.clone();
        cells.extend(other.cells[1..].iter().cloned());
        Ok(Word { letters, cells })
    }
}

impl Ord for Word {
    fn cmp(&self, other: &Self) -> Ordering {
        self.letters
            .len()
            .cmp(&other.letters.len())
            .then_with(|| self.letters.cmp(&other.letters))
            .then_with(|| self.cells.cmp(&other.cells))
    }
}

impl PartialOrd for Word {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.letters.is_empty() {
            return write!(f, "()@{}", self.source());
        }
        for l in &self.letters {
            write!(f, "{l}")?;
        }
        Ok(())
    }
}

/// A word whose letters are non-unit irreducibles from alternating factors.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ReducedWord(Word);

impl ReducedWord {
    pub fn empty(cell: ZeroCell) -> Self {
        ReducedWord(Word::empty(cell))
    }

    pub fn as_word(&self) -> &Word {
        &self.0
    }

    pub fn into_word(self) -> Word {
        self.0
    }

    /// Splits `[γ]_i : w'`.
    pub fn split_first(&self) -> Option<(Letter, ReducedWord)> {
        let first = self.0.letters.first()?.clone();
        Some((first, ReducedWord(self.0.slice(1, self.len()))))
    }

    /// Splits `w' : [γ]_i`.
    pub fn split_last(&self) -> Option<(ReducedWord, Letter)> {
        let n = self.len();
        let last = self.0.letters.last()?.clone();
        Some((ReducedWord(self.0.slice(0, n - 1)), last))
    }

    pub fn slice(&self, start: usize, end: usize) -> ReducedWord {
        ReducedWord(self.0.slice(start, end))
    }
}

impl Deref for ReducedWord {
    type Target = Word;

    fn deref(&self) -> &Word {
        &self.0
    }
}

impl fmt::Debug for ReducedWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl fmt::Display for ReducedWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// A family of factor categories glued along shared 0-cells.
#[derive(Clone, Debug)]
pub struct Amalgam<S: Scalar> {
    factors: Vec<CategorySpec<S>>,
    /// Shared labels with their image in every factor.
    shared: BTreeMap<String, Vec<ZeroCell>>,
    glue: HashMap<(usize, ZeroCell), ZeroCell>,
    /// Inverse of `glue`, per glued cell and factor.
    members: BTreeMap<ZeroCell, BTreeMap<usize, ZeroCell>>,
}

impl<S: Scalar> Amalgam<S> {
    /// Glues the factors along `shared`: each entry names one cell per factor.
    pub fn new(
        factors: Vec<CategorySpec<S>>,
        shared: BTreeMap<String, Vec<ZeroCell>>,
    ) -> Result<Self> {
        if factors.is_empty() {
            return Err(Error::Argument("an amalgam needs at least one factor".into()));
        }
        let n = factors.len();
        // Union-find over (factor, cell).
        let mut nodes: Vec<(usize, ZeroCell)> = Vec::new();
        for (i, f) in factors.iter().enumerate() {
            let mut cells = f.zero_cells();
            cells.sort();
            nodes.extend(cells.into_iter().map(|c| (i, c)));
        }
        let index: HashMap<(usize, ZeroCell), usize> =
            nodes.iter().cloned().enumerate().map(|(k, v)| (v, k)).collect();
        let mut parent: Vec<usize> = (0..nodes.len()).collect();
        fn find(parent: &mut [usize], mut x: usize) -> usize {
            while parent[x] != x {
                parent[x] = parent[parent[x]];
                x = parent[x];
            }
            x
        }
        for (label, images) in &shared {
            if images.len() != n {
                return Err(Error::Argument(format!(
                    "shared label `{label}` maps into {} of {n} factors",
                    images.len()
                )));
            }
            let mut root = None;
            for (i, c) in images.iter().enumerate() {
                let k = *index.get(&(i, c.clone())).ok_or_else(|| {
                    Error::Argument(format!("shared label `{label}`: factor {} has no 0-cell `{c}`", i + 1))
                })?;
                let r = find(&mut parent, k);
                match root {
                    None => root = Some(r),
                    Some(r0) => parent[r] = r0,
                }
            }
        }
        for i in 0..n {
            let mut seen = BTreeSet::new();
            for images in shared.values() {
                if !seen.insert(&images[i]) {
                    return Err(Error::Argument(format!(
                        "two shared labels map to 0-cell `{}` of factor {}",
                        images[i],
                        i + 1
                    )));
                }
            }
        }

        // Representative = smallest (factor, cell) in each class.
        let mut classes: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for k in 0..nodes.len() {
            let r = find(&mut parent, k);
            classes.entry(r).or_default().push(k);
        }
        let mut reps: Vec<Vec<usize>> = classes.into_values().collect();
        for class in &mut reps {
            class.sort();
            let mut factors_seen = BTreeSet::new();
            for &k in class.iter() {
                if !factors_seen.insert(nodes[k].0) {
                    return Err(Error::Argument(format!(
                        "gluing identifies two 0-cells of factor {}",
                        nodes[k].0 + 1
                    )));
                }
            }
        }
        let mut label_count: HashMap<&str, usize> = HashMap::new();
        for class in &reps {
            *label_count.entry(nodes[class[0]].1.label()).or_default() += 1;
        }
        let mut glue = HashMap::new();
        let mut members = BTreeMap::new();
        for class in &reps {
            let (rf, rc) = &nodes[class[0]];
            let name = if label_count[rc.label()] > 1 {
                ZeroCell::new(format!("{}@{}", rc.label(), rf + 1))
            } else {
                rc.clone()
            };
            let mut m = BTreeMap::new();
            for &k in class {
                glue.insert(nodes[k].clone(), name.clone());
                m.insert(nodes[k].0, nodes[k].1.clone());
            }
            members.insert(name, m);
        }
        Ok(Amalgam { factors, shared, glue, members })
    }

    /// No gluing at all: the 0-cells are the disjoint union.
    pub fn disjoint(factors: Vec<CategorySpec<S>>) -> Result<Self> {
        Self::new(factors, BTreeMap::new())
    }

    /// Glues the single 0-cells of one-object factors (the tensor-category case).
    pub fn over_single_cell(factors: Vec<CategorySpec<S>>) -> Result<Self> {
        let mut images = Vec::new();
        for (i, f) in factors.iter().enumerate() {
            match f.zero_cells().as_slice() {
                [c] => images.push(c.clone()),
                _ => {
                    return Err(Error::Argument(format!(
                        "factor {} does not have exactly one 0-cell",
                        i + 1
                    )))
                }
            }
        }
        Self::new(factors, BTreeMap::from([("*".to_string(), images)]))
    }

    pub fn num_factors(&self) -> usize {
        self.factors.len()
    }

    pub fn factor(&self, i: usize) -> &CategorySpec<S> {
        &self.factors[i]
    }

    pub fn factors(&self) -> &[CategorySpec<S>] {
        &self.factors
    }

    pub fn shared(&self) -> &BTreeMap<String, Vec<ZeroCell>> {
        &self.shared
    }

    /// Glued 0-cells in canonical order.
    pub fn cells(&self) -> Vec<ZeroCell> {
        self.members.keys().cloned().collect()
    }

    pub fn has_cell(&self, cell: &ZeroCell) -> bool {
        self.members.contains_key(cell)
    }

    /// The glued image φᵢ of a factor 0-cell.
    pub fn glued(&self, factor: usize, cell: &ZeroCell) -> Result<ZeroCell> {
        self.glue
            .get(&(factor, cell.clone()))
            .cloned()
            .ok_or_else(|| Error::lookup("0-cell", format!("{cell}@{}", factor + 1)))
    }

    /// The factor-`i` cell lying over a glued cell, if any.
    pub fn local(&self, factor: usize, cell: &ZeroCell) -> Option<&ZeroCell> {
        self.members.get(cell)?.get(&factor)
    }

    pub fn letter_source(&self, l: &Letter) -> Result<ZeroCell> {
        self.glued(l.factor, l.irr.source())
    }

    pub fn letter_target(&self, l: &Letter) -> Result<ZeroCell> {
        self.glued(l.factor, l.irr.target())
    }

    pub fn is_unit_letter(&self, l: &Letter) -> bool {
        self.factors[l.factor].is_unit(&l.irr)
    }

    /// The unit of factor `i` at a glued cell, if factor `i` has a cell there.
    pub fn unit_at(&self, factor: usize, cell: &ZeroCell) -> Option<IrrId> {
        let local = self.local(factor, cell)?;
        self.factors[factor].unit(local).ok()
    }

    pub fn letter(&self, factor: usize, label: &str) -> Result<Letter> {
        if factor >= self.factors.len() {
            return Err(Error::lookup("factor", (factor + 1).to_string()));
        }
        Ok(Letter::new(factor, self.factors[factor].irreducible(label)?))
    }

    /// Builds a word, checking that consecutive letters compose.
    pub fn word(&self, letters: Vec<Letter>, empty_cell: Option<&ZeroCell>) -> Result<Word> {
        if letters.is_empty() {
            let cell = empty_cell
                .ok_or_else(|| Error::Argument("the empty word needs a 0-cell".into()))?;
            if !self.has_cell(cell) {
                return Err(Error::lookup("0-cell", cell.label()));
            }
            return Ok(Word::empty(cell.clone()));
        }
        let mut cells = Vec::with_capacity(letters.len() + 1);
        cells.push(self.letter_source(&letters[0])?);
        for (k, l) in letters.iter().enumerate() {
            if l.factor >= self.factors.len() {
                return Err(Error::lookup("factor", (l.factor + 1).to_string()));
            }
            let s = self.letter_source(l)?;
            if s != cells[k] {
                return Err(Error::Composition(format!(
                    "letter {l} starts at {s} but the previous letter ends at {}",
                    cells[k]
                )));
            }
            cells.push(self.letter_target(l)?);
        }
        Ok(Word { letters, cells })
    }

    pub fn is_reduced(&self, v: &Word) -> bool {
        let mut prev: Option<usize> = None;
        for (k, l) in v.letters.iter().enumerate() {
            if l.factor >= self.factors.len() || self.is_unit_letter(l) || prev == Some(l.factor) {
                return false;
            }
            let (Ok(s), Ok(t)) = (self.letter_source(l), self.letter_target(l)) else {
                return false;
            };
            if s != v.cells[k] || t != v.cells[k + 1] {
                return false;
            }
            if self.factors[l.factor].irreducible(l.irr.label()).as_ref() != Ok(&l.irr) {
                return false;
            }
            prev = Some(l.factor);
        }
        v.letters.is_empty() == (v.cells.len() == 1) && self.has_cell(v.source())
    }

    pub fn reduced(&self, v: Word) -> Result<ReducedWord> {
        if self.is_reduced(&v) {
            Ok(ReducedWord(v))
        } else {
            Err(Error::Precondition(format!("{v} is not a reduced word")))
        }
    }

    pub fn empty_word(&self, cell: &ZeroCell) -> Result<ReducedWord> {
        if !self.has_cell(cell) {
            return Err(Error::lookup("0-cell", cell.label()));
        }
        Ok(ReducedWord::empty(cell.clone()))
    }

    /// `[α]_i : w` with the convention that a unit α returns `w` unchanged.
    pub fn left_cons(&self, factor: usize, alpha: &IrrId, w: &ReducedWord) -> Result<ReducedWord> {
        if w.first_factor() == Some(factor) {
            return Err(Error::Precondition(format!("{w} already starts with a factor-{} letter", factor + 1)));
        }
        let letter = Letter::new(factor, alpha.clone());
        let t = self.letter_target(&letter)?;
        if &t != w.source() {
            return Err(Error::Composition(format!("{letter} ends at {t} but {w} starts at {}", w.source())));
        }
        if self.is_unit_letter(&letter) {
            return Ok(w.clone());
        }
        let mut letters = Vec::with_capacity(w.len() + 1);
        letters.push(letter.clone());
        letters.extend(w.letters.iter().cloned());
        let mut cells = Vec::with_capacity(w.cells.len() + 1);
        cells.push(self.letter_source(&letter)?);
        cells.extend(w.cells.iter().cloned());
        Ok(ReducedWord(Word { letters, cells }))
    }

    /// `w : [α]_i`, mirror of [`Amalgam::left_cons`].
    pub fn right_cons(&self, w: &ReducedWord, factor: usize, alpha: &IrrId) -> Result<ReducedWord> {
        if w.last_factor() == Some(factor) {
            return Err(Error::Precondition(format!("{w} already ends with a factor-{} letter", factor + 1)));
        }
        let letter = Letter::new(factor, alpha.clone());
        let s = self.letter_source(&letter)?;
        if &s != w.target() {
            return Err(Error::Composition(format!("{w} ends at {} but {letter} starts at {s}", w.target())));
        }
        if self.is_unit_letter(&letter) {
            return Ok(w.clone());
        }
        let mut letters = w.letters.clone();
        letters.push(letter.clone());
        let mut cells = w.cells.clone();
        cells.push(self.letter_target(&letter)?);
        Ok(ReducedWord(Word { letters, cells }))
    }

    /// Non-unit irreducibles of factor `i` leaving the glued cell `from`.
    pub fn letters_from(&self, factor: usize, from: &ZeroCell, irr_depth: usize) -> Vec<Letter> {
        let Some(local) = self.local(factor, from) else {
            return Vec::new();
        };
        let spec = &self.factors[factor];
        spec.window(irr_depth)
            .into_iter()
            .filter(|x| x.source() == local && !spec.is_unit(x))
            .map(|x| Letter::new(factor, x))
            .collect()
    }

    /// All reduced words of type (a, b) with at most `max_len` letters, in
    /// canonical order. Lazy factors contribute their depth-`irr_depth` window.
    pub fn enumerate_reduced(
        &self,
        a: &ZeroCell,
        b: &ZeroCell,
        max_len: usize,
        irr_depth: usize,
    ) -> Result<Vec<ReducedWord>> {
        for c in [a, b] {
            if !self.has_cell(c) {
                return Err(Error::lookup("0-cell", c.label()));
            }
        }
        let mut alphabet: HashMap<(usize, ZeroCell), Vec<(Letter, ZeroCell)>> = HashMap::new();
        for cell in self.cells() {
            for i in 0..self.factors.len() {
                let ls = self
                    .letters_from(i, &cell, irr_depth)
                    .into_iter()
                    .map(|l| {
                        let t = self.letter_target(&l)?;
                        Ok((l, t))
                    })
                    .collect::<Result<Vec<_>>>()?;
                alphabet.insert((i, cell.clone()), ls);
            }
        }
        let mut out = Vec::new();
        let mut layer = vec![Word::empty(a.clone())];
        for len in 0..=max_len {
            for w in &layer {
                if w.target() == b {
                    out.push(ReducedWord(w.clone()));
                }
            }
            if len == max_len {
                break;
            }
            let mut next = Vec::new();
            for w in &layer {
                for i in 0..self.factors.len() {
                    if w.last_factor() == Some(i) {
                        continue;
                    }
                    for (l, t) in &alphabet[&(i, w.target().clone())] {
                        let mut letters = w.letters.clone();
                        letters.push(l.clone());
                        let mut cells = w.cells.clone();
                        cells.push(t.clone());
                        next.push(Word { letters, cells });
                    }
                }
            }
            layer = next;
        }
        out.sort();
        Ok(out)
    }

    /// Reverses the word and dualizes every letter.
    pub fn dual_word(&self, v: &Word) -> Result<Word> {
        let mut letters = Vec::with_capacity(v.len());
        for l in v.letters.iter().rev() {
            letters.push(Letter::new(l.factor, self.factors[l.factor].dual(&l.irr)?));
        }
        let cells = v.cells.iter().rev().cloned().collect();
        Ok(Word { letters, cells })
    }

    pub fn dual_reduced(&self, w: &ReducedWord) -> Result<ReducedWord> {
        self.reduced(self.dual_word(w)?)
    }

    /// Parses `[label@i]...` or `()@cell`.
    pub fn parse_word(&self, text: &str) -> Result<Word> {
        let text = text.trim();
        if let Some(rest) = text.strip_prefix("()") {
            let cell = rest.strip_prefix('@').ok_or_else(|| {
                Error::Parse(format!("empty word `{text}` needs a 0-cell suffix like `()@a`"))
            })?;
            return self.word(Vec::new(), Some(&ZeroCell::new(cell.trim())));
        }
        let mut letters = Vec::new();
        let mut rest = text;
        while !rest.is_empty() {
            let body = rest
                .strip_prefix('[')
                .ok_or_else(|| Error::Parse(format!("expected `[` in word literal at `{rest}`")))?;
            let close = body
                .find(']')
                .ok_or_else(|| Error::Parse(format!("unterminated letter in `{text}`")))?;
            let (label, index) = body[..close]
                .rsplit_once('@')
                .ok_or_else(|| Error::Parse(format!("letter `[{}]` lacks `@factor`", &body[..close])))?;
            let i: usize = index
                .trim()
                .parse()
                .ok()
                .filter(|&i| i >= 1)
                .ok_or_else(|| Error::Parse(format!("bad factor index `{index}`")))?;
            letters.push(self.letter(i - 1, label.trim())?);
            rest = body[close + 1..].trim_start();
        }
        if letters.is_empty() {
            return Err(Error::Parse("empty word literal; write `()@cell`".into()));
        }
        self.word(letters, None)
    }

    pub fn parse_reduced(&self, text: &str) -> Result<ReducedWord> {
        self.reduced(self.parse_word(text)?)
    }
}
