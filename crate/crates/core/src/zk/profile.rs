use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A demand `(a, b)`: every set with `a` elements of A and `b` of B must
/// contain a chosen quadruple.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "[usize; 2]", into = "[usize; 2]")]
pub struct Profile {
    a: usize,
    b: usize,
}

impl Profile {
    pub fn new(a: usize, b: usize) -> Result<Self> {
        if a < 2 || b < 2 {
            return Err(Error::InvalidProfile { a, b });
        }
        Ok(Profile { a, b })
    }

    pub fn a(&self) -> usize {
        self.a
    }

    pub fn b(&self) -> usize {
        self.b
    }

    pub fn transposed(&self) -> Profile {
        Profile {
            a: self.b,
            b: self.a,
        }
    }

    pub fn check_feasible(&self, n: usize, m: usize) -> Result<()> {
        if self.a > n || self.b > m {
            return Err(Error::Infeasible {
                a: self.a,
                b: self.b,
                n,
                m,
            });
        }
        Ok(())
    }
}

impl TryFrom<[usize; 2]> for Profile {
    type Error = Error;
    fn try_from([a, b]: [usize; 2]) -> Result<Self> {
        Profile::new(a, b)
    }
}

impl From<Profile> for [usize; 2] {
    fn from(p: Profile) -> Self {
        [p.a, p.b]
    }
}

impl fmt::Display for Profile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{},{}", self.a, self.b)
    }
}

/// The two built-in profile families.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Family {
    /// `{(2,k+1), (k+1,2)}`
    K2,
    /// `{(2,k+1), (3,k), (k,3), (k+1,2)}`
    K3,
}

impl Family {
    pub fn tag(&self) -> &'static str {
        match self {
            Family::K2 => "k2",
            Family::K3 => "k3",
        }
    }

    pub fn profiles(&self, k: usize) -> Result<ProfileSet> {
        match self {
            Family::K2 => ProfileSet::family_k2(k),
            Family::K3 => ProfileSet::family_k3(k),
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

/// A nonempty set of profiles, iterated in ascending `(a, b)` order.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<Profile>", into = "Vec<Profile>")]
pub struct ProfileSet {
    profiles: BTreeSet<Profile>,
}

impl ProfileSet {
    pub fn new(profiles: impl IntoIterator<Item = Profile>) -> Result<Self> {
        let profiles: BTreeSet<Profile> = profiles.into_iter().collect();
        if profiles.is_empty() {
            return Err(Error::EmptyProfileSet);
        }
        Ok(ProfileSet { profiles })
    }

    pub fn single(profile: Profile) -> Self {
        ProfileSet {
            profiles: BTreeSet::from([profile]),
        }
    }

    pub fn family_k2(k: usize) -> Result<Self> {
        check_family_k(k)?;
        ProfileSet::new([Profile::new(2, k + 1)?, Profile::new(k + 1, 2)?])
    }

    /// For `k = 2` the profiles `(3,k)` and `(k+1,2)` coincide, so the set
    /// equals `family_k2(2)`.
    pub fn family_k3(k: usize) -> Result<Self> {
        check_family_k(k)?;
        ProfileSet::new([
            Profile::new(2, k + 1)?,
            Profile::new(3, k)?,
            Profile::new(k, 3)?,
            Profile::new(k + 1, 2)?,
        ])
    }

    pub fn iter(&self) -> impl Iterator<Item = &Profile> {
        self.profiles.iter()
    }

    pub fn len(&self) -> usize {
        self.profiles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.profiles.is_empty()
    }

    pub fn check_feasible(&self, n: usize, m: usize) -> Result<()> {
        self.profiles
            .iter()
            .try_for_each(|p| p.check_feasible(n, m))
    }

    pub fn transposed(&self) -> ProfileSet {
        ProfileSet {
            profiles: self.profiles.iter().map(Profile::transposed).collect(),
        }
    }
}

fn check_family_k(k: usize) -> Result<()> {
    if k < 2 {
        return Err(Error::InvalidModulus(k as u64));
    }
    Ok(())
}

impl TryFrom<Vec<Profile>> for ProfileSet {
    type Error = Error;
    fn try_from(v: Vec<Profile>) -> Result<Self> {
        ProfileSet::new(v)
    }
}

impl From<ProfileSet> for Vec<Profile> {
    fn from(s: ProfileSet) -> Self {
        s.profiles.into_iter().collect()
    }
}

/// Parses `"a,b;a,b;..."`, or a named family `"k2:<k>"` / `"k3:<k>"`.
impl FromStr for ProfileSet {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if let Some((name, k)) = s.split_once(':') {
            let k: usize = k
                .trim()
                .parse()
                .map_err(|_| Error::Parse(format!("bad family modulus in {s:?}")))?;
            return match name.trim() {
                "k2" => ProfileSet::family_k2(k),
                "k3" => ProfileSet::family_k3(k),
                other => Err(Error::Parse(format!("unknown profile family {other:?}"))),
            };
        }
        let mut profiles = Vec::new();
        for part in s.split(';').map(str::trim).filter(|p| !p.is_empty()) {
            let (a, b) = part
                .split_once(',')
                .ok_or_else(|| Error::Parse(format!("expected \"a,b\", got {part:?}")))?;
            let parse = |x: &str| {
                x.trim()
                    .parse::<usize>()
                    .map_err(|_| Error::Parse(format!("bad profile entry {x:?} in {part:?}")))
            };
            profiles.push(Profile::new(parse(a)?, parse(b)?)?);
        }
        ProfileSet::new(profiles)
    }
}

impl fmt::Display for ProfileSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (idx, p) in self.profiles.iter().enumerate() {
            if idx > 0 {
                f.write_str(";")?;
            }
            write!(f, "{p}")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pairs(s: &ProfileSet) -> Vec<(usize, usize)> {
        s.iter().map(|p| (p.a(), p.b())).collect()
    }

    #[test]
    fn parses_explicit_lists() {
        let s: ProfileSet = "2,5;5,2".parse().unwrap();
        assert_eq!(pairs(&s), vec![(2, 5), (5, 2)]);
        let s: ProfileSet = " 3,3 ; 3,3 ".parse().unwrap();
        assert_eq!(pairs(&s), vec![(3, 3)]);
        assert_eq!(s.to_string(), "3,3");
    }

    #[test]
    fn parses_families() {
        let s: ProfileSet = "k2:4".parse().unwrap();
        assert_eq!(pairs(&s), vec![(2, 5), (5, 2)]);
        let s: ProfileSet = "k3:4".parse().unwrap();
        assert_eq!(pairs(&s), vec![(2, 5), (3, 4), (4, 3), (5, 2)]);
        let s: ProfileSet = "k3:2".parse().unwrap();
        assert_eq!(pairs(&s), vec![(2, 3), (3, 2)]);
    }

    #[test]
    fn rejects_malformed() {
        for bad in ["", "2", "2,1", "1,5", "a,b", "k4:3", "k2:x", "k2:1", ";"] {
            assert!(
                bad.parse::<ProfileSet>().is_err(),
                "{bad:?} should not parse"
            );
        }
        // a trailing separator is tolerated
        assert!("2,3;".parse::<ProfileSet>().is_ok());
    }

    #[test]
    fn feasibility() {
        let p = Profile::new(3, 4).unwrap();
        assert!(p.check_feasible(3, 4).is_ok());
        assert!(matches!(
            p.check_feasible(2, 4),
            Err(Error::Infeasible { .. })
        ));
    }
}
