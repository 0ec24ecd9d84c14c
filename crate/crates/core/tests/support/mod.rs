pub mod lcs_oracle;
