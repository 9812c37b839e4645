//! Trees of unsecured sequences.
//!
//! File format, one directive per line, `#` starting a comment:
//!
//! ```text
//! family explicit|full|secured
//! branching 2
//! seq 0 1
//! seq 1 R=1
//! ```
//!
//! `explicit` lists the members, `full` takes every sequence with entries
//! below the branching bound, and `secured` lists the sequences with
//! `R = 1`; there a sequence is a member iff no proper initial segment
//! satisfies `R`.

use std::collections::BTreeSet;

use super::codec::{is_prefix, Codec};
use super::BarendregtError;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TreeSpec {
    ExplicitFinite { branching: u64, accepted: BTreeSet<Vec<u64>> },
    FullTree { branching: u64 },
    SecuredRelation { branching: u64, secured: BTreeSet<Vec<u64>> },
}

impl TreeSpec {
    pub fn branching(&self) -> u64 {
        match self {
            TreeSpec::ExplicitFinite { branching, .. }
            | TreeSpec::FullTree { branching }
            | TreeSpec::SecuredRelation { branching, .. } => *branching,
        }
    }

    /// All 0/1 sequences of length at most 2.
    pub fn demo() -> TreeSpec {
        let accepted = [vec![], vec![0], vec![1], vec![0, 0], vec![0, 1], vec![1, 0], vec![1, 1]].into_iter().collect();
        TreeSpec::ExplicitFinite { branching: 2, accepted }
    }

    pub fn parse(text: &str) -> Result<TreeSpec, BarendregtError> {
        let err = |line: usize, m: &str| BarendregtError::Spec { line, message: m.to_string() };
        let mut family: Option<String> = None;
        let mut branching: Option<u64> = None;
        let mut listed = BTreeSet::new();
        for (n, raw) in text.lines().enumerate() {
            let line = n + 1;
            let words: Vec<&str> = raw.split('#').next().unwrap_or("").split_whitespace().collect();
            let Some((&key, rest)) = words.split_first() else { continue };
            match key {
                "family" => match rest {
                    [f @ ("explicit" | "full" | "secured")] => family = Some(f.to_string()),
                    _ => return Err(err(line, "family must be explicit, full or secured")),
                },
                "branching" => match rest {
                    [b] => branching = Some(b.parse().map_err(|_| err(line, "bad branching bound"))?),
                    _ => return Err(err(line, "branching takes one natural")),
                },
                "seq" => {
                    let mut xs = Vec::new();
                    let mut flagged = false;
                    for w in rest {
                        match *w {
                            "R=1" => flagged = true,
                            "R=0" => {}
                            w => xs.push(w.parse().map_err(|_| err(line, &format!("bad entry '{w}'")))?),
                        }
                    }
                    if family.as_deref() == Some("secured") && !flagged {
                        continue;
                    }
                    listed.insert(xs);
                }
                _ => return Err(err(line, &format!("unknown directive '{key}'"))),
            }
        }
        let branching = branching.unwrap_or(10);
        match family.as_deref() {
            Some("explicit") => Ok(TreeSpec::ExplicitFinite { branching, accepted: listed }),
            Some("full") => Ok(TreeSpec::FullTree { branching }),
            Some("secured") => Ok(TreeSpec::SecuredRelation { branching, secured: listed }),
            _ => Err(err(1, "missing family line")),
        }
    }
}

/// Membership in the tree of a [`TreeSpec`].
#[derive(Clone, Debug)]
pub struct TreeOracle {
    spec: TreeSpec,
    codec: Codec,
    /// Known for the explicit and full families, decided for secured ones.
    pub well_founded: Option<bool>,
}

pub fn tree_from_spec(spec: TreeSpec) -> Result<TreeOracle, BarendregtError> {
    let codec = Codec::new(spec.branching())?;
    let check_entries = |set: &BTreeSet<Vec<u64>>| {
        for s in set {
            if let Some(&x) = s.iter().find(|&&x| x >= spec.branching()) {
                return Err(BarendregtError::EntryTooLarge { entry: x, base: spec.branching() });
            }
        }
        Ok(())
    };
    let well_founded = match &spec {
        TreeSpec::ExplicitFinite { accepted, .. } => {
            check_entries(accepted)?;
            for s in accepted {
                if !accepted.contains(&s[..s.len() - s.len().min(1)]) {
                    return Err(BarendregtError::NotPrefixClosed(s.clone()));
                }
            }
            Some(true)
        }
        TreeSpec::FullTree { .. } => Some(false),
        TreeSpec::SecuredRelation { branching, secured } => {
            check_entries(secured)?;
            // Past the longest listed sequence nothing new gets secured, so the
            // tree is finite iff no sequence one longer is a member.
            let len = secured.iter().map(|s| s.len()).max().unwrap_or(0) + 1;
            let oracle = TreeOracle { spec: spec.clone(), codec, well_founded: None };
            let mut any = false;
            let mut s = vec![0; len];
            loop {
                if oracle.member(&s) {
                    any = true;
                    break;
                }
                let Some(i) = s.iter().rposition(|&x| x + 1 < *branching) else { break };
                s[i] += 1;
                s[i + 1..].iter_mut().for_each(|x| *x = 0);
            }
            Some(!any)
        }
    };
    Ok(TreeOracle { spec, codec, well_founded })
}

impl TreeOracle {
    pub fn spec(&self) -> &TreeSpec {
        &self.spec
    }

    pub fn codec(&self) -> Codec {
        self.codec
    }

    pub fn member(&self, s: &[u64]) -> bool {
        if s.iter().any(|&x| x >= self.spec.branching()) {
            return false;
        }
        match &self.spec {
            TreeSpec::ExplicitFinite { accepted, .. } => accepted.contains(s),
            TreeSpec::FullTree { .. } => true,
            TreeSpec::SecuredRelation { secured, .. } => {
                !secured.iter().any(|r| r.len() < s.len() && is_prefix(r, s))
            }
        }
    }

    pub fn member_code(&self, code: u64) -> bool {
        self.member(&self.codec.decode(code).decoded)
    }
}
