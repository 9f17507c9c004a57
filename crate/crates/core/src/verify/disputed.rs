use std::collections::BTreeSet;
use std::path::Path;

use super::{Target, VerifyError};

/// Targets whose failure is documented rather than fatal.
///
/// File format: one target per line (`S:4`, `HSQ_K3`, `EQ22_25`, ...);
/// blank lines and `#` comments are ignored.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct DisputedSet {
    targets: BTreeSet<Target>,
}

impl DisputedSet {
    pub fn parse(text: &str) -> Result<Self, VerifyError> {
        let mut targets = BTreeSet::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let t = line.parse::<Target>().map_err(|e| VerifyError::Disputed {
                line: i + 1,
                message: e.to_string(),
            })?;
            targets.insert(t);
        }
        Ok(Self { targets })
    }

    pub fn load(path: &Path) -> Result<Self, VerifyError> {
        let text = std::fs::read_to_string(path).map_err(|e| VerifyError::Io(format!("{}: {e}", path.display())))?;
        Self::parse(&text)
    }

    pub fn contains(&self, target: &Target) -> bool {
        self.targets.contains(target)
    }

    pub fn len(&self) -> usize {
        self.targets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.targets.is_empty()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::series::{FamilyTag, SeriesFamily};

    #[test]
    fn parses_lines_and_comments() {
        let set = DisputedSet::parse("# header\nS:4\n\n  HSQ_K3  # trailing\nv:2\n").unwrap();
        assert_eq!(set.len(), 3);
        assert!(set.contains(&Target::Catalog(SeriesFamily::indexed(FamilyTag::S, 4))));
        assert!(set.contains(&Target::Catalog(SeriesFamily::indexed(FamilyTag::V, 2))));
        assert!(!set.contains(&Target::Catalog(SeriesFamily::indexed(FamilyTag::S, 3))));
    }

    #[test]
    fn reports_bad_line() {
        match DisputedSet::parse("S:4\nQ:1\n") {
            Err(VerifyError::Disputed { line, .. }) => assert_eq!(line, 2),
            other => panic!("unexpected {other:?}"),
        }
    }
}
