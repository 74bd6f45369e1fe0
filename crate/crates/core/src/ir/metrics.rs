use super::{walk_statements, ConceptUnit, Statement, Visibility};
use std::collections::BTreeMap;

/// Structural counts over a set of units.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct LevelMetrics {
    pub unit_count: usize,
    pub operation_count: usize,
    pub param_count: usize,
    pub const_count: usize,
    /// Over all attributes and operations.
    pub visibility_histogram: BTreeMap<Visibility, usize>,
    pub loop_count: usize,
}

impl LevelMetrics {
    pub fn members(&self) -> usize {
        self.visibility_histogram.values().sum()
    }

    /// Mean visibility rank (Private 0, Protected 1, Public 2); 0 for no members.
    pub fn mean_visibility(&self) -> f64 {
        let n = self.members();
        if n == 0 {
            return 0.0;
        }
        let total: usize = self.visibility_histogram.iter().map(|(v, c)| *v as usize * c).sum();
        total as f64 / n as f64
    }

    pub fn count(&self, v: Visibility) -> usize {
        self.visibility_histogram.get(&v).copied().unwrap_or(0)
    }
}

pub fn level_metrics<'a>(units: impl IntoIterator<Item = &'a ConceptUnit>) -> LevelMetrics {
    let mut m = LevelMetrics::default();
    for u in units {
        m.unit_count += 1;
        m.operation_count += u.operations.len();
        m.const_count += u.attributes.iter().filter(|a| a.is_const()).count();
        for a in &u.attributes {
            *m.visibility_histogram.entry(a.visibility).or_default() += 1;
        }
        for op in &u.operations {
            *m.visibility_histogram.entry(op.visibility).or_default() += 1;
            m.param_count += op.params.len();
            walk_statements(&op.body, &mut |s| {
                if matches!(s, Statement::While { .. }) {
                    m.loop_count += 1;
                }
            });
        }
    }
    m
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_set_is_all_zero() {
        let m = level_metrics(std::iter::empty());
        assert_eq!(m, LevelMetrics::default());
        assert_eq!(m.mean_visibility(), 0.0);
    }
}
