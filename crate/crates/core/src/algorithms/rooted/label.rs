use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use smallvec::SmallVec;

/// Binary group label; the last bit names the group (0 = G1, 1 = G2).
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GroupLabel {
    len: u32,
    words: SmallVec<[u64; 2]>,
}

impl GroupLabel {
    pub fn empty() -> Self {
        GroupLabel {
            len: 0,
            words: SmallVec::new(),
        }
    }

    /// The label every agent starts with, "10".
    pub fn initial() -> Self {
        let mut l = GroupLabel::empty();
        l.push(true);
        l.push(false);
        l
    }

    pub fn len(&self) -> usize {
        self.len as usize
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn bit(&self, i: usize) -> bool {
        (self.words[i / 64] >> (i % 64)) & 1 == 1
    }

    pub fn push(&mut self, bit: bool) {
        let i = self.len as usize;
        if i % 64 == 0 {
            self.words.push(0);
        }
        if bit {
            self.words[i / 64] |= 1 << (i % 64);
        }
        self.len += 1;
    }

    pub fn with(&self, bit: bool) -> Self {
        let mut l = self.clone();
        l.push(bit);
        l
    }

    pub fn last(&self) -> Option<bool> {
        (self.len > 0).then(|| self.bit(self.len as usize - 1))
    }

    /// Member of G2 when the label ends in 1.
    pub fn is_g2(&self) -> bool {
        self.last() == Some(true)
    }

    pub fn is_prefix_of(&self, other: &GroupLabel) -> bool {
        self.len <= other.len && (0..self.len()).all(|i| self.bit(i) == other.bit(i))
    }
}

impl fmt::Display for GroupLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.len() {
            f.write_str(if self.bit(i) { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl fmt::Debug for GroupLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "\"{self}\"")
    }
}

impl FromStr for GroupLabel {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let mut l = GroupLabel::empty();
        for c in s.chars() {
            match c {
                '0' => l.push(false),
                '1' => l.push(true),
                other => return Err(format!("label character {other:?} is not 0 or 1")),
            }
        }
        Ok(l)
    }
}

impl Serialize for GroupLabel {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for GroupLabel {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}
