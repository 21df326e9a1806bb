//! Permutation algebra: parity, rotations, Lehmer ranking, the generator set
//! of the bubble-sort star graph, and the reserved vertex families used by the
//! decycling constructions.

use std::fmt;
use std::str::FromStr;

use serde::{de, Deserialize, Deserializer, Serialize, Serializer};

use crate::error::Error;

/// Smallest dimension the crate supports.
pub const MIN_DIMENSION: usize = 3;
/// Largest dimension whose rank still fits in a `u64` (20! < 2^64).
pub const MAX_DIMENSION: usize = 20;

/// n! for n <= 20. Panics beyond that because the product overflows `u64`.
pub fn factorial(n: usize) -> u64 {
    assert!(n <= MAX_DIMENSION, "factorial overflows u64 for n > 20");
    (1..=n as u64).product()
}

/// Even/odd classification of a permutation by its inversion count.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    pub fn flipped(self) -> Parity {
        match self {
            Parity::Even => Parity::Odd,
            Parity::Odd => Parity::Even,
        }
    }
}

impl fmt::Display for Parity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Parity::Even => "even",
            Parity::Odd => "odd",
        })
    }
}

/// A pair of 1-based positions `(i,j)` with `i < j`; applying it to a
/// permutation swaps the symbols at those positions.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Transposition {
    i: u8,
    j: u8,
}

impl Transposition {
    /// Builds a transposition from two distinct positions, ordering them so
    /// that `first < second`.
    pub fn new(a: usize, b: usize) -> Result<Self, Error> {
        if a == b {
            return Err(Error::InvalidTransposition {
                i: a,
                j: b,
                reason: "positions must differ".into(),
            });
        }
        let (i, j) = if a < b { (a, b) } else { (b, a) };
        if i == 0 || j > MAX_DIMENSION {
            return Err(Error::InvalidTransposition {
                i: a,
                j: b,
                reason: format!("positions must lie in 1..={MAX_DIMENSION}"),
            });
        }
        Ok(Transposition {
            i: i as u8,
            j: j as u8,
        })
    }

    /// Smaller of the two positions (1-based).
    pub fn first(&self) -> usize {
        self.i as usize
    }

    /// Larger of the two positions (1-based).
    pub fn second(&self) -> usize {
        self.j as usize
    }
}

impl fmt::Display for Transposition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.i, self.j)
    }
}

/// An arrangement of the symbols `1..=n` with `3 <= n <= 20`.
///
/// Comparison order is lexicographic on the symbol sequence.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation {
    symbols: Vec<u8>,
}

impl Permutation {
    /// Validates that `symbols` is a bijection on `1..=n` for a supported `n`.
    pub fn new(symbols: Vec<u8>) -> Result<Self, Error> {
        let n = symbols.len();
        if !(MIN_DIMENSION..=MAX_DIMENSION).contains(&n) {
            return Err(Error::UnsupportedDimension {
                n,
                min: MIN_DIMENSION,
                max: MAX_DIMENSION,
            });
        }
        let mut seen = [false; MAX_DIMENSION + 1];
        for &s in &symbols {
            let s = s as usize;
            if s == 0 || s > n {
                return Err(Error::InvalidPermutation {
                    reason: format!("symbol {s} outside 1..={n}"),
                });
            }
            if seen[s] {
                return Err(Error::InvalidPermutation {
                    reason: format!("symbol {s} appears more than once"),
                });
            }
            seen[s] = true;
        }
        Ok(Permutation { symbols })
    }

    pub fn identity(n: usize) -> Result<Self, Error> {
        Permutation::new((1..=n as u8).collect())
    }

    pub fn n(&self) -> usize {
        self.symbols.len()
    }

    /// Symbols in position order, 1-based values.
    pub fn symbols(&self) -> &[u8] {
        &self.symbols
    }

    /// 1-based position at which `symbol` sits, if it is in range.
    pub fn position_of(&self, symbol: u8) -> Option<usize> {
        self.symbols
            .iter()
            .position(|&s| s == symbol)
            .map(|p| p + 1)
    }

    /// Number of pairs of symbols that are out of natural order.
    pub fn inversion_count(&self) -> u32 {
        let mut count = 0;
        for a in 0..self.symbols.len() {
            for b in a + 1..self.symbols.len() {
                if self.symbols[a] > self.symbols[b] {
                    count += 1;
                }
            }
        }
        count
    }

    pub fn parity(&self) -> Parity {
        if self.inversion_count().is_multiple_of(2) {
            Parity::Even
        } else {
            Parity::Odd
        }
    }

    pub fn is_even(&self) -> bool {
        self.parity() == Parity::Even
    }

    pub fn is_odd(&self) -> bool {
        self.parity() == Parity::Odd
    }

    /// Swaps the symbols at the two positions of `t`. Applying the same `t`
    /// twice restores the original; the result always has opposite parity.
    pub fn apply(&self, t: Transposition) -> Result<Permutation, Error> {
        if t.second() > self.n() {
            return Err(Error::DimensionMismatch {
                expected: self.n(),
                found: t.second(),
            });
        }
        let mut symbols = self.symbols.clone();
        symbols.swap(t.first() - 1, t.second() - 1);
        Ok(Permutation { symbols })
    }

    /// Cyclic left shift by `k` positions (`k` is reduced mod `n`, so
    /// `rotate(n)` is the identity map).
    pub fn rotate(&self, k: usize) -> Permutation {
        let n = self.n();
        let k = k % n;
        let mut symbols = Vec::with_capacity(n);
        symbols.extend_from_slice(&self.symbols[k..]);
        symbols.extend_from_slice(&self.symbols[..k]);
        Permutation { symbols }
    }

    /// Dense 0-based index of this permutation among all n! arrangements,
    /// via the factorial number system: digit i counts later symbols smaller
    /// than the one at position i.
    pub fn rank(&self) -> u64 {
        rank_slice(&self.symbols)
    }

    /// Inverse of [`rank`](Self::rank): the permutation of `1..=n` with the
    /// given index.
    pub fn unrank(idx: u64, n: usize) -> Result<Permutation, Error> {
        if !(MIN_DIMENSION..=MAX_DIMENSION).contains(&n) {
            return Err(Error::UnsupportedDimension {
                n,
                min: MIN_DIMENSION,
                max: MAX_DIMENSION,
            });
        }
        let count = factorial(n);
        if idx >= count {
            return Err(Error::RankOutOfRange {
                rank: idx,
                n,
                count,
            });
        }
        let mut pool: Vec<u8> = (1..=n as u8).collect();
        let mut symbols = Vec::with_capacity(n);
        let mut rest = idx;
        let mut place = factorial(n - 1);
        for i in 0..n {
            let digit = (rest / place) as usize;
            rest %= place;
            symbols.push(pool.remove(digit));
            if i + 1 < n {
                place /= (n - 1 - i) as u64;
            }
        }
        Ok(Permutation { symbols })
    }
}

/// Lehmer rank of a symbol slice already known to be a valid permutation.
/// Shared with the graph module so adjacency can rank scratch buffers
/// without constructing a `Permutation` per neighbor.
pub(crate) fn rank_slice(symbols: &[u8]) -> u64 {
    let n = symbols.len();
    let mut rank = 0u64;
    let mut place = factorial(n - 1);
    for i in 0..n {
        let smaller_later = symbols[i + 1..].iter().filter(|&&s| s < symbols[i]).count() as u64;
        rank += smaller_later * place;
        if i + 1 < n {
            place /= (n - 1 - i) as u64;
        }
    }
    rank
}

/// Parity of the permutation with the given rank, without materializing it:
/// the inversion count equals the sum of the factorial-number-system digits.
pub fn rank_parity(idx: u64, n: usize) -> Result<Parity, Error> {
    if !(MIN_DIMENSION..=MAX_DIMENSION).contains(&n) {
        return Err(Error::UnsupportedDimension {
            n,
            min: MIN_DIMENSION,
            max: MAX_DIMENSION,
        });
    }
    let count = factorial(n);
    if idx >= count {
        return Err(Error::RankOutOfRange {
            rank: idx,
            n,
            count,
        });
    }
    let mut digit_sum = 0u64;
    let mut rest = idx;
    let mut place = factorial(n - 1);
    for i in 0..n {
        digit_sum += rest / place;
        rest %= place;
        if i + 1 < n {
            place /= (n - 1 - i) as u64;
        }
    }
    Ok(if digit_sum.is_multiple_of(2) {
        Parity::Even
    } else {
        Parity::Odd
    })
}

/// The transition set of the bubble-sort star graph: all star transpositions
/// `(1,j)` for `2 <= j <= n` plus the adjacent swaps `(i,i+1)` for
/// `2 <= i <= n-1`, in lexicographic order. Size `2n-3`.
pub fn generator_set(n: usize) -> Result<Vec<Transposition>, Error> {
    if !(MIN_DIMENSION..=MAX_DIMENSION).contains(&n) {
        return Err(Error::UnsupportedDimension {
            n,
            min: MIN_DIMENSION,
            max: MAX_DIMENSION,
        });
    }
    let mut set = Vec::with_capacity(2 * n - 3);
    for j in 2..=n {
        set.push(Transposition::new(1, j)?);
    }
    for i in 2..n {
        set.push(Transposition::new(i, i + 1)?);
    }
    Ok(set)
}

/// All `n` rotations of `u`, from `rotate(0)` (= `u` itself) up to
/// `rotate(n-1)`.
pub fn rotation_set(u: &Permutation) -> Vec<Permutation> {
    (0..u.n()).map(|k| u.rotate(k)).collect()
}

/// For dimension 5 only: the five vertices obtained by rotating `u` by
/// `m = 0..4` and then cyclically shifting the trailing three symbols one
/// step further. Together with [`rotation_set`] these are the reserved odd
/// vertices of the dimension-5 decycling construction.
pub fn skewed_rotation_set(u: &Permutation) -> Result<Vec<Permutation>, Error> {
    if u.n() != 5 {
        return Err(Error::UnsupportedDimension {
            n: u.n(),
            min: 5,
            max: 5,
        });
    }
    let mut set = Vec::with_capacity(5);
    for m in 0..5 {
        let mut symbols = u.rotate(m).symbols.clone();
        symbols[2..5].rotate_left(1);
        set.push(Permutation { symbols });
    }
    Ok(set)
}

/// The paired-block vertex family of `u`.
///
/// For even `n`, the symbols are grouped into the n/2 consecutive pairs
/// `(u_1,u_2)(u_3,u_4)...` and every arrangement of those pairs as atomic
/// blocks is returned: `(n/2)!` members. For odd `n`, two families are
/// combined: block arrangements of the first `n-1` symbols with `u_n` pinned
/// to the last position, and block arrangements of the symbols with `u_2`
/// deleted and re-inserted at position 2. The families share exactly `u`, so
/// the union has `2((n-1)/2)! - 1` members. Every member has `u`'s parity.
pub fn paired_permutation_set(u: &Permutation) -> Result<Vec<Permutation>, Error> {
    if u.n() < 4 {
        return Err(Error::UnsupportedDimension {
            n: u.n(),
            min: 4,
            max: MAX_DIMENSION,
        });
    }
    if u.n().is_multiple_of(2) {
        return Ok(block_arrangements(u.symbols(), &[]));
    }
    let (first, second) = paired_block_families(u)?;
    let mut set = first;
    for member in second {
        if !set.contains(&member) {
            set.push(member);
        }
    }
    Ok(set)
}

/// The two constituent families of [`paired_permutation_set`] for odd `n`,
/// before deduplication. Each family contains `((n-1)/2)!` members and each
/// is returned in lexicographic order of its block arrangements; `u` itself
/// is the first member of both.
pub fn paired_block_families(
    u: &Permutation,
) -> Result<(Vec<Permutation>, Vec<Permutation>), Error> {
    let n = u.n();
    if n < 5 || n.is_multiple_of(2) {
        return Err(Error::UnsupportedDimension {
            n,
            min: 5,
            max: MAX_DIMENSION,
        });
    }
    // Family one: pair up the first n-1 symbols, keep u_n fixed at the end.
    let first = block_arrangements(&u.symbols[..n - 1], &[(n, u.symbols[n - 1])]);
    // Family two: delete u_2, pair up what remains, re-insert u_2 at
    // position 2 of every arrangement.
    let mut reduced = Vec::with_capacity(n - 1);
    reduced.push(u.symbols[0]);
    reduced.extend_from_slice(&u.symbols[2..]);
    let second = block_arrangements(&reduced, &[(2, u.symbols[1])]);
    Ok((first, second))
}

/// All arrangements of the consecutive pairs of `base` as atomic blocks, in
/// lexicographic order of the block sequence, with the given `(position,
/// symbol)` pins inserted afterwards (positions 1-based, ascending).
fn block_arrangements(base: &[u8], pins: &[(usize, u8)]) -> Vec<Permutation> {
    debug_assert!(base.len().is_multiple_of(2));
    let blocks: Vec<[u8; 2]> = base.chunks_exact(2).map(|c| [c[0], c[1]]).collect();
    let m = blocks.len();
    let mut order: Vec<usize> = (0..m).collect();
    let mut out = Vec::with_capacity(factorial(m) as usize);
    loop {
        let mut symbols = Vec::with_capacity(base.len() + pins.len());
        for &b in &order {
            symbols.extend_from_slice(&blocks[b]);
        }
        for &(pos, sym) in pins {
            symbols.insert(pos - 1, sym);
        }
        out.push(Permutation { symbols });
        if !next_lex_permutation(&mut order) {
            break;
        }
    }
    out
}

/// Advances `seq` to its lexicographic successor in place; returns false once
/// `seq` is the final (descending) arrangement.
fn next_lex_permutation(seq: &mut [usize]) -> bool {
    if seq.len() < 2 {
        return false;
    }
    let mut i = seq.len() - 1;
    while i > 0 && seq[i - 1] >= seq[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = seq.len() - 1;
    while seq[j] <= seq[i - 1] {
        j -= 1;
    }
    seq.swap(i - 1, j);
    seq[i..].reverse();
    true
}

impl fmt::Display for Permutation {
    /// Digit string for `n <= 9` (e.g. `45123`), comma-separated integers for
    /// larger dimensions (e.g. `1,2,10,...`).
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.n() <= 9 {
            for &s in &self.symbols {
                write!(f, "{s}")?;
            }
            Ok(())
        } else {
            let text: Vec<String> = self.symbols.iter().map(|s| s.to_string()).collect();
            f.write_str(&text.join(","))
        }
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Permutation({self})")
    }
}

impl FromStr for Permutation {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let parse_err = |reason: &str| Error::ParsePermutation {
            input: s.to_string(),
            reason: reason.to_string(),
        };
        let symbols: Vec<u8> = if s.contains(',') {
            s.split(',')
                .map(|part| {
                    part.trim()
                        .parse::<u8>()
                        .map_err(|_| parse_err(&format!("bad integer {:?}", part.trim())))
                })
                .collect::<Result<_, _>>()?
        } else {
            s.chars()
                .map(|c| {
                    c.to_digit(10)
                        .filter(|&d| d >= 1)
                        .map(|d| d as u8)
                        .ok_or_else(|| parse_err(&format!("bad symbol character {c:?}")))
                })
                .collect::<Result<_, _>>()?
        };
        Permutation::new(symbols).map_err(|e| Error::ParsePermutation {
            input: s.to_string(),
            reason: e.to_string(),
        })
    }
}

impl Serialize for Permutation {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Permutation {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let text = String::deserialize(deserializer)?;
        text.parse().map_err(de::Error::custom)
    }
}
