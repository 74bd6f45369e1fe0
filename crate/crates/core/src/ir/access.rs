use super::{ConceptUnit, Visibility};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Access {
    Allowed,
    Denied(String),
}

impl Access {
    pub fn is_allowed(&self) -> bool {
        matches!(self, Access::Allowed)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AccessError {
    #[error("unit `{unit}` has no member `{member}`")]
    UnknownMember { unit: String, member: String },
}

/// Decide whether a caller may use `member` of `target`.
///
/// Private members are open to the owner only, protected ones to units of the
/// same domain, public ones to everybody. Units named in the target's friend
/// list see everything.
pub fn check_access(
    caller_domain: &str,
    caller_unit: &str,
    target: &ConceptUnit,
    member: &str,
) -> Result<Access, AccessError> {
    let visibility = target.member_visibility(member).ok_or_else(|| AccessError::UnknownMember {
        unit: target.name.clone(),
        member: member.to_string(),
    })?;
    if caller_unit == target.name || target.friends.iter().any(|f| f == caller_unit) {
        return Ok(Access::Allowed);
    }
    Ok(match visibility {
        Visibility::Public => Access::Allowed,
        Visibility::Protected if caller_domain == target.domain => Access::Allowed,
        Visibility::Protected => Access::Denied(format!(
            "`{}.{member}` is protected to domain `{}`; caller `{caller_unit}` is in domain `{caller_domain}`",
            target.name, target.domain
        )),
        Visibility::Private => Access::Denied(format!(
            "`{}.{member}` is private to `{}`; caller is `{caller_unit}` in domain `{caller_domain}`",
            target.name, target.name
        )),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ir::{Attribute, Level, Operation, UnitKind};

    fn unit(vis: Visibility) -> ConceptUnit {
        let mut u = ConceptUnit::new("Target", UnitKind::Class, Level::E1, "apples");
        u.attributes.push(Attribute::var("x", "int", vis));
        u.operations.push(Operation::new("Go", vis));
        u
    }

    #[test]
    fn visibility_table() {
        for (vis, same, other) in [
            (Visibility::Private, false, false),
            (Visibility::Protected, true, false),
            (Visibility::Public, true, true),
        ] {
            let u = unit(vis);
            assert_eq!(check_access("apples", "Caller", &u, "Go").unwrap().is_allowed(), same, "{vis}");
            assert_eq!(check_access("pencils", "Caller", &u, "x").unwrap().is_allowed(), other, "{vis}");
            assert!(check_access("pencils", "Target", &u, "Go").unwrap().is_allowed());
        }
    }

    #[test]
    fn friends_see_private_members() {
        let mut u = unit(Visibility::Private);
        u.friends.push("Pal".into());
        assert!(check_access("elsewhere", "Pal", &u, "x").unwrap().is_allowed());
    }

    #[test]
    fn unknown_member_is_an_error() {
        let u = unit(Visibility::Public);
        assert_eq!(
            check_access("apples", "Caller", &u, "nope"),
            Err(AccessError::UnknownMember { unit: "Target".into(), member: "nope".into() })
        );
    }
}
