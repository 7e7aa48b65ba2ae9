pub mod ast;
pub mod check;
pub mod cli;
pub mod desugar;
pub mod formula;
pub mod grounder;
pub mod oracle;
pub mod parser;
pub mod pipeline;
pub mod simplify;
pub mod termeval;
