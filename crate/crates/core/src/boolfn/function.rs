use std::collections::BTreeMap;
use std::fmt;
use std::hash::{Hash, Hasher};

use super::{BoolFnError, Letter, DAGGER, STAR};

/// Renders a string of letters. Letters 2 and 3 are written `*` and `†` for
/// the four-letter sabotage alphabet; every other alphabet uses digits and
/// then lowercase letters (`a` = 10).
pub fn format_word(word: &[Letter], q: u8) -> String {
    word.iter()
        .map(|&l| match (q, l) {
            (4, STAR) => '*',
            (4, DAGGER) => '†',
            (_, l) if l < 10 => char::from(b'0' + l),
            (_, l) => char::from(b'a' + (l - 10)),
        })
        .collect()
}

/// Parses a letter string. Accepts digits, lowercase letters (from 10), `*`
/// (letter 2) and `†` (letter 3). Separators `|` and `_` are skipped so that
/// composed inputs can be written as `10|0100`.
pub fn parse_word(text: &str) -> Option<Vec<Letter>> {
    let mut word = Vec::with_capacity(text.len());
    for c in text.chars() {
        let letter = match c {
            '0'..='9' => c as u8 - b'0',
            'a'..='z' => c as u8 - b'a' + 10,
            '*' => STAR,
            '†' => DAGGER,
            '|' | '_' => continue,
            _ => return None,
        };
        word.push(letter);
    }
    Some(word)
}

/// A nonempty set of distinct positions.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Block(Vec<usize>);

impl Block {
    pub fn new(positions: impl IntoIterator<Item = usize>, n: usize) -> Result<Self, BoolFnError> {
        let mut positions: Vec<usize> = positions.into_iter().collect();
        let len = positions.len();
        positions.sort_unstable();
        positions.dedup();
        if positions.is_empty() || positions.len() != len {
            return Err(BoolFnError::BadBlock);
        }
        if let Some(&p) = positions.iter().find(|&&p| p >= n) {
            return Err(BoolFnError::BadPosition { position: p, n });
        }
        Ok(Self(positions))
    }

    /// Builds a block from a position bitmask (bit `i` = position `i`).
    pub fn from_mask(mask: u64) -> Result<Self, BoolFnError> {
        if mask == 0 {
            return Err(BoolFnError::BadBlock);
        }
        Ok(Self((0..64).filter(|i| mask >> i & 1 == 1).collect()))
    }

    pub fn positions(&self) -> &[usize] {
        &self.0
    }

    pub fn mask(&self) -> u64 {
        self.0.iter().fold(0, |m, &p| m | 1 << p)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, position: usize) -> bool {
        self.0.binary_search(&position).is_ok()
    }
}

impl fmt::Display for Block {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let items: Vec<String> = self.0.iter().map(|p| (p + 1).to_string()).collect();
        write!(f, "{{{}}}", items.join(","))
    }
}

/// Returns `x` with every position of `block` flipped.
pub fn flip(x: &[Letter], q: u8, block: &Block) -> Result<Vec<Letter>, BoolFnError> {
    if q != 2 {
        return Err(BoolFnError::AlphabetUnsupported(q));
    }
    if let Some(&letter) = x.iter().find(|&&l| l > 1) {
        return Err(BoolFnError::BadLetter { letter, q });
    }
    let mut out = x.to_vec();
    for &p in block.positions() {
        let slot = out
            .get_mut(p)
            .ok_or(BoolFnError::BadPosition { position: p, n: x.len() })?;
        *slot ^= 1;
    }
    Ok(out)
}

/// Letters fixed at some positions of a length-`n` string.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct PartialAssignment {
    n: usize,
    letters: BTreeMap<usize, Letter>,
}

impl PartialAssignment {
    pub fn empty(n: usize) -> Self {
        Self { n, letters: BTreeMap::new() }
    }

    /// The restriction of `x` to `positions`.
    pub fn from_input(x: &[Letter], positions: impl IntoIterator<Item = usize>) -> Self {
        let letters = positions.into_iter().map(|p| (p, x[p])).collect();
        Self { n: x.len(), letters }
    }

    /// Sets a position; setting it again to the same letter is a no-op.
    pub fn set(&mut self, position: usize, letter: Letter) -> Result<(), BoolFnError> {
        if position >= self.n {
            return Err(BoolFnError::BadPosition { position, n: self.n });
        }
        match self.letters.insert(position, letter) {
            Some(old) if old != letter => {
                self.letters.insert(position, old);
                Err(BoolFnError::ConflictingAssignment(position))
            }
            _ => Ok(()),
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, position: usize) -> Option<Letter> {
        self.letters.get(&position).copied()
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, Letter)> + '_ {
        self.letters.iter().map(|(&p, &l)| (p, l))
    }

    /// Bitmask of the set positions.
    pub fn support_mask(&self) -> u64 {
        self.letters.keys().fold(0, |m, &p| m | 1 << p)
    }

    pub fn is_consistent_with(&self, x: &[Letter]) -> bool {
        x.len() == self.n && self.letters.iter().all(|(&p, &l)| x[p] == l)
    }
}

impl fmt::Display for PartialAssignment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let items: Vec<String> =
            self.letters.iter().map(|(p, l)| format!("{}={}", p + 1, l)).collect();
        write!(f, "{{{}}}", items.join(","))
    }
}

/// A 0/1-valued function on an explicitly enumerated set of length-`n`
/// strings over the alphabet `0..q`.
#[derive(Clone)]
pub struct PartialFunction {
    name: Option<String>,
    n: usize,
    q: u8,
    /// Sorted by code, no duplicates, never empty.
    entries: Vec<(u64, bool)>,
    /// `q^(n-1-i)` for position `i`.
    place: Vec<u64>,
}

impl PartialEq for PartialFunction {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n && self.q == other.q && self.entries == other.entries
    }
}

impl Eq for PartialFunction {}

impl Hash for PartialFunction {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.n.hash(state);
        self.q.hash(state);
        self.entries.hash(state);
    }
}

impl fmt::Debug for PartialFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("PartialFunction")
            .field("name", &self.name)
            .field("n", &self.n)
            .field("q", &self.q)
            .field("domain", &self.entries.len())
            .finish()
    }
}

fn place_values(n: usize, q: u8) -> Result<Vec<u64>, BoolFnError> {
    if q < 2 {
        return Err(BoolFnError::BadAlphabet(q));
    }
    let exp = u32::try_from(n).ok();
    let too_big = || BoolFnError::ArityOverflow {
        required: format!("{q}^{n}"),
        cap: usize::MAX,
    };
    if exp.and_then(|e| (q as u64).checked_pow(e)).is_none() {
        return Err(too_big());
    }
    Ok((0..n).map(|i| (q as u64).pow((n - 1 - i) as u32)).collect())
}

impl PartialFunction {
    /// Builds a function from an explicit listing.
    pub fn new(
        n: usize,
        q: u8,
        listing: impl IntoIterator<Item = (Vec<Letter>, bool)>,
    ) -> Result<Self, BoolFnError> {
        let place = place_values(n, q)?;
        let mut entries = Vec::new();
        for (word, value) in listing {
            entries.push((encode_with(&place, q, &word)?, value));
        }
        Self::from_parts(n, q, place, entries)
    }

    /// Builds a function from packed codes. Codes must be below `q^n`.
    pub fn from_codes(n: usize, q: u8, entries: Vec<(u64, bool)>) -> Result<Self, BoolFnError> {
        let place = place_values(n, q)?;
        let limit = (q as u64).pow(n as u32);
        if let Some(&(code, _)) = entries.iter().find(|(c, _)| *c >= limit) {
            return Err(BoolFnError::OutOfDomain(format!("code {code}")));
        }
        Self::from_parts(n, q, place, entries)
    }

    fn from_parts(
        n: usize,
        q: u8,
        place: Vec<u64>,
        mut entries: Vec<(u64, bool)>,
    ) -> Result<Self, BoolFnError> {
        if entries.is_empty() {
            return Err(BoolFnError::EmptyDomain);
        }
        entries.sort_unstable_by_key(|e| e.0);
        if let Some(w) = entries.windows(2).find(|w| w[0].0 == w[1].0) {
            let word = decode_with(&place, q, w[0].0);
            return Err(BoolFnError::DuplicateInput(format_word(&word, q)));
        }
        Ok(Self { name: None, n, q, entries, place })
    }

    /// The total function on all `q^n` strings given by `rule`.
    pub fn total(n: usize, q: u8, rule: impl Fn(&[Letter]) -> bool) -> Result<Self, BoolFnError> {
        let place = place_values(n, q)?;
        let size = (q as u64).pow(n as u32);
        if size > super::DEFAULT_DOMAIN_CAP as u64 {
            return Err(BoolFnError::ArityOverflow {
                required: size.to_string(),
                cap: super::DEFAULT_DOMAIN_CAP,
            });
        }
        let entries = (0..size)
            .map(|code| (code, rule(&decode_with(&place, q, code))))
            .collect();
        Self::from_parts(n, q, place, entries)
    }

    /// Binary total function from a truth table; bit `c` of `table` is the
    /// value at the input whose code is `c`.
    pub fn from_truth_table(n: usize, table: u64) -> Result<Self, BoolFnError> {
        if n > 6 {
            return Err(BoolFnError::ArityOverflow { required: format!("2^{n}"), cap: 64 });
        }
        let entries = (0..1u64 << n).map(|c| (c, table >> c & 1 == 1)).collect();
        Self::from_codes(n, 2, entries)
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = Some(name.into());
        self
    }

    pub fn name(&self) -> Option<&str> {
        self.name.as_deref()
    }

    /// The name, or a placeholder when the function is anonymous.
    pub fn label(&self) -> &str {
        self.name.as_deref().unwrap_or("<anonymous>")
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn q(&self) -> u8 {
        self.q
    }

    /// Number of domain strings.
    pub fn domain_size(&self) -> usize {
        self.entries.len()
    }

    pub fn is_total(&self) -> bool {
        self.entries.len() as u64 == (self.q as u64).pow(self.n as u32)
    }

    pub fn is_binary(&self) -> bool {
        self.q == 2
    }

    pub(crate) fn require_binary(&self) -> Result<(), BoolFnError> {
        if self.q == 2 {
            Ok(())
        } else {
            Err(BoolFnError::AlphabetUnsupported(self.q))
        }
    }

    /// Packed `(code, value)` pairs sorted by code.
    pub fn codes(&self) -> &[(u64, bool)] {
        &self.entries
    }

    /// Domain strings with their values, in code order.
    pub fn entries(&self) -> impl Iterator<Item = (Vec<Letter>, bool)> + '_ {
        self.entries.iter().map(|&(c, v)| (self.decode(c), v))
    }

    pub fn domain(&self) -> impl Iterator<Item = Vec<Letter>> + '_ {
        self.entries.iter().map(|&(c, _)| self.decode(c))
    }

    pub fn inputs_with_value(&self, value: bool) -> impl Iterator<Item = Vec<Letter>> + '_ {
        self.entries
            .iter()
            .filter(move |e| e.1 == value)
            .map(|&(c, _)| self.decode(c))
    }

    pub fn encode(&self, word: &[Letter]) -> Result<u64, BoolFnError> {
        if word.len() != self.n {
            return Err(BoolFnError::BadLength { expected: self.n, got: word.len() });
        }
        encode_with(&self.place, self.q, word)
    }

    pub fn decode(&self, code: u64) -> Vec<Letter> {
        decode_with(&self.place, self.q, code)
    }

    /// Letter at `position` of the string with the given code.
    #[inline]
    pub fn letter(&self, code: u64, position: usize) -> Letter {
        (code / self.place[position] % self.q as u64) as Letter
    }

    /// Replaces the letter at `position`.
    #[inline]
    pub fn with_letter(&self, code: u64, position: usize, letter: Letter) -> u64 {
        let old = self.letter(code, position) as u64;
        code - old * self.place[position] + letter as u64 * self.place[position]
    }

    /// Code of `x^B` for a binary function, `block_mask` bit `i` being position `i`.
    #[inline]
    pub fn flip_code(&self, code: u64, block_mask: u64) -> u64 {
        debug_assert_eq!(self.q, 2);
        let mut bits = 0u64;
        let mut m = block_mask;
        while m != 0 {
            let p = m.trailing_zeros() as usize;
            bits |= 1 << (self.n - 1 - p);
            m &= m - 1;
        }
        code ^ bits
    }

    /// Value at a packed input, `None` off the domain.
    #[inline]
    pub fn value_at_code(&self, code: u64) -> Option<bool> {
        self.entries
            .binary_search_by_key(&code, |e| e.0)
            .ok()
            .map(|i| self.entries[i].1)
    }

    pub fn contains(&self, x: &[Letter]) -> bool {
        self.encode(x).map(|c| self.value_at_code(c).is_some()).unwrap_or(false)
    }

    pub fn evaluate(&self, x: &[Letter]) -> Result<bool, BoolFnError> {
        let code = self.encode(x)?;
        self.value_at_code(code)
            .ok_or_else(|| BoolFnError::OutOfDomain(format_word(x, self.q)))
    }

    /// The common value when the function is constant on its domain.
    pub fn constant_value(&self) -> Option<bool> {
        let first = self.entries[0].1;
        self.entries.iter().all(|e| e.1 == first).then_some(first)
    }

    pub fn negate(&self) -> Self {
        let mut out = self.clone();
        for e in &mut out.entries {
            e.1 = !e.1;
        }
        out.name = self.name.as_ref().map(|n| format!("NOT_{n}"));
        out
    }

    /// Keeps the domain strings with `letter` at `position` and drops that position.
    pub fn restrict(&self, position: usize, letter: Letter) -> Result<Self, BoolFnError> {
        if position >= self.n {
            return Err(BoolFnError::BadPosition { position, n: self.n });
        }
        if letter >= self.q {
            return Err(BoolFnError::BadLetter { letter, q: self.q });
        }
        let place = place_values(self.n - 1, self.q)?;
        let high = self.place[position] * self.q as u64;
        let low = self.place[position];
        let entries: Vec<(u64, bool)> = self
            .entries
            .iter()
            .filter(|&&(c, _)| self.letter(c, position) == letter)
            .map(|&(c, v)| ((c / high) * low + c % low, v))
            .collect();
        if entries.is_empty() {
            return Err(BoolFnError::EmptyDomain);
        }
        // Dropping a digit preserves code order.
        Ok(Self { name: None, n: self.n - 1, q: self.q, entries, place })
    }

    /// `f^x`: domain `{x}` plus every input with the opposite value; 1 only at `x`.
    pub fn subfunction(&self, x: &[Letter]) -> Result<Self, BoolFnError> {
        let code = self.encode(x)?;
        let fx = self
            .value_at_code(code)
            .ok_or_else(|| BoolFnError::OutOfDomain(format_word(x, self.q)))?;
        let entries = self
            .entries
            .iter()
            .filter(|&&(c, v)| c == code || v != fx)
            .map(|&(c, _)| (c, c == code))
            .collect();
        Ok(Self { name: None, n: self.n, q: self.q, entries, place: self.place.clone() })
    }

    /// Whether every domain string extending `a` has the same value.
    /// Errors when no domain string extends `a`.
    pub fn fixes_value(&self, a: &PartialAssignment) -> Result<bool, BoolFnError> {
        if a.n() != self.n {
            return Err(BoolFnError::BadLength { expected: self.n, got: a.n() });
        }
        let fixed: Vec<(usize, Letter)> = a.iter().collect();
        let mut seen: Option<bool> = None;
        for &(c, v) in &self.entries {
            if fixed.iter().all(|&(p, l)| self.letter(c, p) == l) {
                match seen {
                    None => seen = Some(v),
                    Some(s) if s != v => return Ok(false),
                    _ => {}
                }
            }
        }
        seen.map(|_| true).ok_or(BoolFnError::EmptyDomain)
    }

    // ---- builtin families ----

    pub fn or(n: usize) -> Self {
        Self::total(n, 2, |x| x.contains(&1)).expect("OR fits the cap").with_name(format!("OR{n}"))
    }

    pub fn and(n: usize) -> Self {
        Self::total(n, 2, |x| x.iter().all(|&b| b == 1))
            .expect("AND fits the cap")
            .with_name(format!("AND{n}"))
    }

    pub fn parity(n: usize) -> Self {
        Self::total(n, 2, |x| x.iter().filter(|&&b| b == 1).count() % 2 == 1)
            .expect("PARITY fits the cap")
            .with_name(format!("PARITY{n}"))
    }

    /// Majority; ties (even `n`) evaluate to 0.
    pub fn majority(n: usize) -> Self {
        Self::total(n, 2, |x| 2 * x.iter().filter(|&&b| b == 1).count() > n)
            .expect("MAJ fits the cap")
            .with_name(format!("MAJ{n}"))
    }

    /// The 1-bit identity.
    pub fn identity() -> Self {
        Self::total(1, 2, |x| x[0] == 1).unwrap().with_name("ID1")
    }

    pub fn constant(n: usize, value: bool) -> Self {
        Self::total(n, 2, |_| value)
            .expect("constant fits the cap")
            .with_name(format!("CONST{}_{n}", value as u8))
    }

    /// OR promised to have at most one 1.
    pub fn unique_marked_or(n: usize) -> Self {
        let listing = std::iter::once((vec![0; n], false)).chain((0..n).map(|i| {
            let mut x = vec![0; n];
            x[i] = 1;
            (x, true)
        }));
        Self::new(n, 2, listing).expect("valid listing").with_name(format!("UOR{n}"))
    }

    /// The collision problem on `[n]^n` (letters `0..n`): value 0 on 1-to-1
    /// inputs and 1 on 2-to-1 inputs; every other input is off the promise.
    pub fn collision(n: usize) -> Result<Self, BoolFnError> {
        let q = u8::try_from(n).map_err(|_| BoolFnError::BadAlphabet(0))?;
        let place = place_values(n, q)?;
        let size = (q as u64).pow(n as u32);
        if size > super::DEFAULT_DOMAIN_CAP as u64 {
            return Err(BoolFnError::ArityOverflow {
                required: size.to_string(),
                cap: super::DEFAULT_DOMAIN_CAP,
            });
        }
        let mut entries = Vec::new();
        for code in 0..size {
            let word = decode_with(&place, q, code);
            let mut counts = vec![0usize; n];
            for &l in &word {
                counts[l as usize] += 1;
            }
            if counts.iter().all(|&c| c <= 1) {
                entries.push((code, false));
            } else if n % 2 == 0 && counts.iter().all(|&c| c == 0 || c == 2) {
                entries.push((code, true));
            }
        }
        Ok(Self::from_parts(n, q, place, entries)?.with_name(format!("COLLISION{n}")))
    }
}

fn encode_with(place: &[u64], q: u8, word: &[Letter]) -> Result<u64, BoolFnError> {
    if word.len() != place.len() {
        return Err(BoolFnError::BadLength { expected: place.len(), got: word.len() });
    }
    let mut code = 0;
    for (&l, &p) in word.iter().zip(place) {
        if l >= q {
            return Err(BoolFnError::BadLetter { letter: l, q });
        }
        code += l as u64 * p;
    }
    Ok(code)
}

fn decode_with(place: &[u64], q: u8, code: u64) -> Vec<Letter> {
    place.iter().map(|&p| (code / p % q as u64) as Letter).collect()
}
