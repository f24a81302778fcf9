//! The seventeen totally real candidate fields, embedded from `data/fields`.

use super::NumberField;
use crate::error::Result;

/// `(d_K, fixture text)` in increasing order of degree and discriminant.
pub const FIELDS: [(u32, &str); 17] = [
    (5, include_str!("../../data/fields/d5.nf")),
    (8, include_str!("../../data/fields/d8.nf")),
    (12, include_str!("../../data/fields/d12.nf")),
    (13, include_str!("../../data/fields/d13.nf")),
    (17, include_str!("../../data/fields/d17.nf")),
    (21, include_str!("../../data/fields/d21.nf")),
    (24, include_str!("../../data/fields/d24.nf")),
    (49, include_str!("../../data/fields/d49.nf")),
    (81, include_str!("../../data/fields/d81.nf")),
    (148, include_str!("../../data/fields/d148.nf")),
    (169, include_str!("../../data/fields/d169.nf")),
    (725, include_str!("../../data/fields/d725.nf")),
    (1125, include_str!("../../data/fields/d1125.nf")),
    (1600, include_str!("../../data/fields/d1600.nf")),
    (1957, include_str!("../../data/fields/d1957.nf")),
    (2000, include_str!("../../data/fields/d2000.nf")),
    (14641, include_str!("../../data/fields/d14641.nf")),
];

pub fn field(disc: u32) -> Option<Result<NumberField>> {
    FIELDS.iter().find(|(d, _)| *d == disc).map(|(_, text)| NumberField::parse(text))
}

pub fn all() -> Result<Vec<(u32, NumberField)>> {
    FIELDS.iter().map(|(d, text)| NumberField::parse(text).map(|k| (*d, k))).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fixtures_validate() {
        let fields = all().unwrap();
        assert_eq!(fields.len(), 17);
        for (d, k) in &fields {
            assert_eq!(k.discriminant(), &(*d).into());
            assert_eq!(k.field_subspace().unwrap().dim(), k.degree());
            let again = NumberField::parse(&k.format()).unwrap();
            assert_eq!(again.trace_form(&again.one()).unwrap(), k.trace_form(&k.one()).unwrap());
        }
    }
}
