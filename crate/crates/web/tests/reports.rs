use falg_web::{classes, saturate, word_equal};

const INVOLUTION: &str = "signature\n  op f 1\ngenerators a\nrelations\n  f(f(a)) = a\n";

const MONOID: &str = "\
signature
  op m 2
  op e 0
equations
  vars x y z
  m(m(x, y), z) = m(x, m(y, z))
  vars x
  m(e, x) = x
  m(x, e) = x
";

#[test]
fn word_problem() {
    assert_eq!(word_equal(INVOLUTION, "f(f(f(a)))", "f(a)"), "equal\n");
    assert_eq!(word_equal(INVOLUTION, "f(a)", "a"), "not equal\n");
    assert_eq!(word_equal(MONOID, "m(e, e)", "e"), "equal\n");
}

#[test]
fn saturation_table() {
    assert_eq!(
        saturate(INVOLUTION, 100),
        "finite quotient with 2 elements\n0 = a\n1 = f(a)\nalgebra quotient\n  carrier 0 1\n  op f: (0)->1 (1)->0\n"
    );
    assert!(saturate(&INVOLUTION.replace("  f(f(a)) = a\n", ""), 5).starts_with("inconclusive"));
}

#[test]
fn class_listing() {
    let text = classes(INVOLUTION, 3);
    assert!(text.starts_with("2 classes among 4 terms"), "{text}");
    assert!(text.contains("a: a, f(f(a))\n"), "{text}");
}

#[test]
fn errors_are_reported_not_thrown() {
    let text = word_equal(
        "signature\n  op g 2\ngenerators a\nrelations\n  g(a) = a\n",
        "a",
        "a",
    );
    assert!(
        text.starts_with("error:") && text.contains("line 5, column 3"),
        "{text}"
    );
    assert!(word_equal(INVOLUTION, "h(a)", "a").starts_with("error:"));
}
