pub mod ir;
pub mod dsl;
pub mod fixtures;
pub mod interp;
pub mod tasks;
pub mod capability;
pub mod redescribe;
pub mod kb;
pub mod cli;
