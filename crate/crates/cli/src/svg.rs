//! One SVG document per frame: the container, each codon's three arms and
//! its five fields at their current radii.

use std::fmt::Write;

use replicon_core::{Arm, CodonType, FieldKind, World};

fn color(kind: FieldKind) -> &'static str {
    match kind {
        FieldKind::Red => "#d62728",
        FieldKind::Blue => "#1f77b4",
        FieldKind::Green => "#2ca02c",
        FieldKind::Purple => "#9467bd",
        FieldKind::Yellow => "#e6b800",
    }
}

pub fn render(world: &World) -> String {
    let c = world.container;
    let p = &world.params;
    let (w, h) = (c.width(), c.height());
    // SVG y grows downward.
    let tx = |x: f64| x - c.x_min;
    let ty = |y: f64| c.y_max - y;
    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" viewBox="-2 -2 {:.3} {:.3}" width="{:.0}" height="{:.0}">"#,
        w + 4.0,
        h + 4.0,
        (w + 4.0) * 4.0,
        (h + 4.0) * 4.0
    );
    let _ = writeln!(
        s,
        r##"<rect x="0" y="0" width="{w:.3}" height="{h:.3}" fill="#f4f4f4" stroke="#808080" stroke-width="0.5"/>"##
    );
    let _ = writeln!(
        s,
        r##"<text x="1" y="4" font-size="3" fill="#404040">step {}</text>"##,
        world.step
    );
    for codon in &world.codons {
        let m = codon.middle();
        let vertical = match codon.ctype {
            CodonType::Type0 => FieldKind::Purple,
            CodonType::Type1 => FieldKind::Green,
        };
        for (arm, kind) in [
            (Arm::Red, FieldKind::Red),
            (Arm::Blue, FieldKind::Blue),
            (Arm::Vertical, vertical),
        ] {
            let t = codon.tip(arm, p);
            let _ = writeln!(
                s,
                r#"<line x1="{:.3}" y1="{:.3}" x2="{:.3}" y2="{:.3}" stroke="{}" stroke-width="0.6"/>"#,
                tx(m.x),
                ty(m.y),
                tx(t.x),
                ty(t.y),
                color(kind)
            );
        }
        for kind in [FieldKind::Red, FieldKind::Blue, vertical, FieldKind::Yellow] {
            let at = codon.field_center(kind, p);
            let _ = writeln!(
                s,
                r#"<circle cx="{:.3}" cy="{:.3}" r="{:.3}" fill="none" stroke="{}" stroke-width="0.2"/>"#,
                tx(at.x),
                ty(at.y),
                codon.field_radius(kind, p),
                color(kind)
            );
        }
    }
    s.push_str("</svg>\n");
    s
}
