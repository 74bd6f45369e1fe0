use std::collections::BTreeMap;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CollectionShape {
    /// Unordered; bound to the world's focus container at instantiation.
    Set,
    /// Ordered; starts empty.
    List,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ElementConstraint {
    Any,
    Kind(String),
    Token,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CollectionSpec {
    pub shape: CollectionShape,
    pub element: ElementConstraint,
}

/// Flat nominal registry: collection type names map to a shape and an element
/// constraint, and kind-specific collections widen to abstract ones.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TypeRegistry {
    collections: BTreeMap<String, CollectionSpec>,
    widening: BTreeMap<String, String>,
}

impl Default for TypeRegistry {
    fn default() -> Self {
        let mut reg = TypeRegistry { collections: BTreeMap::new(), widening: BTreeMap::new() };
        let any = |shape| CollectionSpec { shape, element: ElementConstraint::Any };
        reg.collections.insert("objectSet".into(), any(CollectionShape::Set));
        reg.collections.insert("objectList".into(), any(CollectionShape::List));
        reg.collections.insert("List".into(), any(CollectionShape::List));
        reg.collections.insert(
            "intList".into(),
            CollectionSpec { shape: CollectionShape::List, element: ElementConstraint::Token },
        );
        for kind in ["Apple", "Banana", "Block", "Candy", "Cup", "Pencil"] {
            reg.register_kind(kind);
        }
        reg
    }
}

impl TypeRegistry {
    /// `APP_Set` style prefix for an entity kind.
    pub fn kind_prefix(kind: &str) -> String {
        kind.chars().filter(|c| c.is_ascii_alphanumeric()).take(3).collect::<String>().to_ascii_uppercase()
    }

    pub fn set_type_for(kind: &str) -> String {
        format!("{}_Set", Self::kind_prefix(kind))
    }

    pub fn list_type_for(kind: &str) -> String {
        format!("{}_List", Self::kind_prefix(kind))
    }

    /// Registers `XXX_Set` and `XXX_List` for an entity kind.
    pub fn register_kind(&mut self, kind: &str) {
        let set = Self::set_type_for(kind);
        let list = Self::list_type_for(kind);
        let element = ElementConstraint::Kind(kind.to_string());
        self.collections
            .insert(set.clone(), CollectionSpec { shape: CollectionShape::Set, element: element.clone() });
        self.collections.insert(list.clone(), CollectionSpec { shape: CollectionShape::List, element });
        self.widening.insert(set, "objectSet".into());
        self.widening.insert(list, "List".into());
    }

    pub fn collection(&self, ty: &str) -> Option<&CollectionSpec> {
        self.collections.get(ty)
    }

    pub fn is_collection(&self, ty: &str) -> bool {
        self.collections.contains_key(ty)
    }

    /// The abstract type a kind-specific collection widens to; abstract types
    /// widen to themselves.
    pub fn widen(&self, ty: &str) -> String {
        self.widening.get(ty).cloned().unwrap_or_else(|| ty.to_string())
    }

    /// Whether an entity of `kind` may be stored in a collection of type `ty`.
    pub fn admits(&self, ty: &str, kind: &str) -> bool {
        match self.collections.get(ty).map(|c| &c.element) {
            Some(ElementConstraint::Kind(k)) => k == kind,
            Some(ElementConstraint::Token) => false,
            Some(ElementConstraint::Any) | None => true,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn apple_set_widens_to_object_set() {
        let reg = TypeRegistry::default();
        assert_eq!(reg.widen("APP_Set"), "objectSet");
        assert_eq!(reg.widen("APP_List"), "List");
        assert_eq!(reg.widen("objectSet"), "objectSet");
    }

    #[test]
    fn kind_specific_sets_reject_other_kinds() {
        let mut reg = TypeRegistry::default();
        assert!(reg.admits("APP_Set", "Apple"));
        assert!(!reg.admits("APP_Set", "Pencil"));
        assert!(reg.admits("objectSet", "Pencil"));
        reg.register_kind("Pencil");
        assert_eq!(reg.collection("PEN_Set").unwrap().shape, CollectionShape::Set);
    }
}
