pub mod gfp;
pub mod weyl;
pub mod modrep;
pub mod tpoly;
pub mod heckealg;
pub mod finhecke;
pub mod residue;
pub mod twisted;
pub mod cli;
