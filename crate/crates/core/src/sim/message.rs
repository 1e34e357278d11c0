use smallvec::SmallVec;

/// A message: a short sequence of fixed-width words.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Message {
    words: SmallVec<[u64; 8]>,
}

impl Message {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_words(words: &[u64]) -> Self {
        Self { words: SmallVec::from_slice(words) }
    }

    pub fn push(&mut self, word: u64) {
        self.words.push(word);
    }

    pub fn extend(&mut self, words: impl IntoIterator<Item = u64>) {
        self.words.extend(words);
    }

    pub fn words(&self) -> &[u64] {
        &self.words
    }

    pub fn word(&self, i: usize) -> u64 {
        self.words[i]
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }
}

impl FromIterator<u64> for Message {
    fn from_iter<I: IntoIterator<Item = u64>>(iter: I) -> Self {
        Self { words: iter.into_iter().collect() }
    }
}

/// Splits `value` into `count` little-endian words of `bits` bits. Returns
/// the words even when `value` does not fit; the top word then exceeds the
/// word width and the simulator rejects the message.
pub fn split_words(value: u64, bits: u32, count: usize) -> impl Iterator<Item = u64> {
    let mask = if bits >= 64 { u64::MAX } else { (1u64 << bits) - 1 };
    (0..count).map(move |i| {
        let shift = bits as u64 * i as u64;
        let rest = if shift >= 64 { 0 } else { value >> shift };
        if i + 1 == count {
            rest
        } else {
            rest & mask
        }
    })
}

/// Inverse of [`split_words`].
pub fn join_words(words: &[u64], bits: u32) -> u64 {
    words.iter().rev().fold(0u64, |acc, &w| acc.checked_shl(bits).unwrap_or(0) | w)
}
