use std::sync::OnceLock;

use serde::Serialize;

use super::{cf_parse, ClosedForm, ClosedFormError};
use crate::series::{FamilyTag, SeriesFamily};

/// One catalogued sum with its closed form, frozen as printed.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CatalogEntry {
    pub family: SeriesFamily,
    pub closed_form: ClosedForm,
    /// The series symbol in the source notation, e.g. `s(4)`.
    pub source_label: String,
    pub disputed: bool,
}

const RAW: &[(FamilyTag, Option<u32>, &str, &str)] = &[
    (FamilyTag::S, Some(1), "s(1)", "2*ln2"),
    (FamilyTag::S, Some(2), "s(2)", "z2 - 2*ln2^2"),
    (FamilyTag::S, Some(3), "s(3)", "2*z3 - 2*ln2*z2 + 4/3*ln2^3"),
    (FamilyTag::S, Some(4), "s(4)", "9/4*z4 - 4*ln2*z3 + 2*ln2^2*z2 - 2/3*ln2^4"),
    (
        FamilyTag::S,
        Some(5),
        "s(5)",
        "6*z5 - 2*z2*z3 - 9/2*ln2*z4 + 4*ln2^2*z3 - 4/3*ln2^3*z2 + 4/15*ln2^5",
    ),
    (
        FamilyTag::S,
        Some(6),
        "s(6)",
        "79/16*z6 - 12*ln2*z5 + 4*ln2*z2*z3 - 2*z3^2 + 9/2*ln2^2*z4 - 8/3*ln2^3*z3 + 2/3*ln2^4*z2 - 4/45*ln2^6",
    ),
    (
        FamilyTag::S,
        Some(7),
        "s(7)",
        "18*z7 - 79/8*ln2*z6 - 6*z2*z5 + 12*ln2^2*z5 - 9/2*z3*z4 - 3*ln2^3*z4 + 4*ln2*z3^2 \
         - 4*ln2^2*z2*z3 + 4/3*ln2^4*z3 - 4/15*ln2^5*z2 + 8/315*ln2^7",
    ),
    (FamilyTag::L, Some(1), "l(1)", "1/2*pi - 1"),
    (FamilyTag::L, Some(2), "l(2)", "1/2*pi*ln2 - 1"),
    (FamilyTag::L, Some(3), "l(3)", "1/8*pi*z2 + 1/4*pi*ln2^2 - 1"),
    (FamilyTag::L, Some(4), "l(4)", "1/8*pi*z3 + 1/48*pi^3*ln2 + 1/12*pi*ln2^3 - 1"),
    (
        FamilyTag::L,
        Some(5),
        "l(5)",
        "19/128*pi*z4 + 1/8*pi*ln2*z3 + 1/96*pi^3*ln2^2 + 1/48*pi*ln2^4 - 1",
    ),
    (FamilyTag::V, Some(1), "v(1)", "3/2*z2"),
    (FamilyTag::V, Some(2), "v(2)", "7/2*z3 - 3*ln2*z2"),
    (FamilyTag::V, Some(3), "v(3)", "15/4*z4 - 7*ln2*z3 + 3*ln2^2*z2"),
    (
        FamilyTag::V,
        Some(4),
        "v(4)",
        "31/2*z5 - 15/2*ln2*z4 - 13/2*z2*z3 + 7*ln2^2*z3 - 2*ln2^3*z2",
    ),
    (
        FamilyTag::V,
        Some(5),
        "v(5)",
        "399/32*z6 - 31*ln2*z5 + 15/2*ln2^2*z4 + 13*ln2*z2*z3 - 7*z3^2 - 14/3*ln2^3*z3 + ln2^4*z2",
    ),
    (FamilyTag::Z, Some(1), "z(1)", "1/2*pi"),
    (FamilyTag::Z, Some(2), "z(2)", "pi*ln2 - 1/2*pi"),
    (FamilyTag::Z, Some(3), "z(3)", "3/4*pi*ln2^2 - pi*ln2 + 1/2*pi"),
    (
        FamilyTag::Z,
        Some(4),
        "z(4)",
        "1/16*pi*z3 + 1/8*pi*ln2*z2 + 1/3*pi*ln2^3 - 3/4*pi*ln2^2 + pi*ln2 - 1/2*pi",
    ),
    (FamilyTag::W, Some(1), "w(1)", "45/16*z4"),
    (FamilyTag::W, Some(2), "w(2)", "315/32*z6 - 49/8*z3^2"),
    (FamilyTag::W, Some(3), "w(3)", "315/8*z8 - 217/4*z3*z5 + 49/4*z2*z3^2"),
    (FamilyTag::LinH, Some(2), "sum H_k/k^2", "2*z3"),
    (FamilyTag::LinOddH, Some(2), "sum h_k/k^2", "7/4*z3"),
    (
        FamilyTag::LinOddH,
        Some(3),
        "sum h_k/k^3",
        "-53/8*z4 + 7*ln2*z3 - 2*ln2^2*z2 + 1/3*ln2^4 + 8*Li4",
    ),
    (FamilyTag::HsqK3, None, "sum h_k^2/k^3", "7/4*z2*z3 - 31/16*z5"),
    (
        FamilyTag::H2kWeighted,
        None,
        "sum H_k H_2k/(2k)^3",
        "307/128*z5 - 1/16*z2*z3 + 1/3*ln2^3*z2 - 7/8*ln2^2*z3 - 1/15*ln2^5 - 2*ln2*Li4 - 2*Li5",
    ),
    (
        FamilyTag::AltH2K3,
        None,
        "sum (-1)^(k-1) H_k^2/k^3",
        "2/15*ln2^5 - 11/8*z2*z3 - 19/32*z5 + 7/4*ln2^2*z3 - 2/3*ln2^3*z2 + 4*ln2*Li4 + 4*Li5",
    ),
    (
        FamilyTag::MixHhK3,
        None,
        "sum H_k h_k/k^3",
        "279/16*z5 - 7*ln2^2*z3 + 8/3*ln2^3*z2 - 8/15*ln2^5 - 16*ln2*Li4 - 16*Li5",
    ),
];

/// The printed closed-form texts, in catalog order.
pub fn catalog_texts() -> impl Iterator<Item = (SeriesFamily, &'static str)> {
    RAW.iter().map(|(tag, n, _, text)| (SeriesFamily::new(*tag, *n).expect("catalog family"), *text))
}

pub fn catalog_all() -> &'static [CatalogEntry] {
    static CATALOG: OnceLock<Vec<CatalogEntry>> = OnceLock::new();
    CATALOG.get_or_init(|| {
        RAW.iter()
            .map(|(tag, n, label, text)| CatalogEntry {
                family: SeriesFamily::new(*tag, *n).expect("catalog family"),
                closed_form: cf_parse(text).expect("catalog closed form parses"),
                source_label: (*label).to_string(),
                disputed: false,
            })
            .collect()
    })
}

pub fn catalog_get(family: &SeriesFamily) -> Result<&'static CatalogEntry, ClosedFormError> {
    catalog_all()
        .iter()
        .find(|e| e.family == *family)
        .ok_or_else(|| ClosedFormError::NotFound(family.to_string()))
}
