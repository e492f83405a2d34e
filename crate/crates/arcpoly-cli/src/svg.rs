//! Minimal hand-written SVG emission: axes, polylines per order, optional
//! zero markers. No plotting dependency; curves are plain polylines.

pub struct Curve {
    pub label: String,
    pub points: Vec<(f64, f64)>,
    pub markers: Vec<f64>,
}

const COLORS: [&str; 6] = [
    "#1f6fb2", "#c23b22", "#2e8b57", "#8a2be2", "#d4820a", "#444444",
];

pub fn render(curves: &[Curve]) -> String {
    let (w, h) = (720.0, 480.0);
    let (ml, mr, mt, mb) = (56.0, 16.0, 16.0, 40.0);
    let (pw, ph) = (w - ml - mr, h - mt - mb);

    let mut ymin = f64::INFINITY;
    let mut ymax = f64::NEG_INFINITY;
    for c in curves {
        for &(_, y) in &c.points {
            ymin = ymin.min(y);
            ymax = ymax.max(y);
        }
    }
    if !ymin.is_finite() || ymin == ymax {
        ymin = -1.0;
        ymax = 1.0;
    }
    let pad = 0.06 * (ymax - ymin);
    ymin -= pad;
    ymax += pad;

    let sx = move |x: f64| ml + (x + 1.0) / 2.0 * pw;
    let sy = move |y: f64| mt + (ymax - y) / (ymax - ymin) * ph;

    let mut s = String::new();
    s.push_str(&format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{w}\" height=\"{h}\" viewBox=\"0 0 {w} {h}\">\n"
    ));
    s.push_str(&format!(
        "  <rect width=\"{w}\" height=\"{h}\" fill=\"white\"/>\n"
    ));
    // frame and axes
    s.push_str(&format!(
        "  <rect x=\"{ml}\" y=\"{mt}\" width=\"{pw}\" height=\"{ph}\" fill=\"none\" stroke=\"#999\"/>\n"
    ));
    if ymin < 0.0 && ymax > 0.0 {
        let y0 = sy(0.0);
        s.push_str(&format!(
            "  <line x1=\"{ml}\" y1=\"{y0}\" x2=\"{}\" y2=\"{y0}\" stroke=\"#bbb\" stroke-dasharray=\"4 3\"/>\n",
            ml + pw
        ));
    }
    let x0 = sx(0.0);
    s.push_str(&format!(
        "  <line x1=\"{x0}\" y1=\"{mt}\" x2=\"{x0}\" y2=\"{}\" stroke=\"#bbb\" stroke-dasharray=\"4 3\"/>\n",
        mt + ph
    ));
    // x tick labels
    for &xt in &[-1.0, -0.5, 0.0, 0.5, 1.0] {
        let px = sx(xt);
        s.push_str(&format!(
            "  <text x=\"{px}\" y=\"{}\" font-size=\"12\" text-anchor=\"middle\" fill=\"#333\">{xt}</text>\n",
            mt + ph + 16.0
        ));
    }
    // y tick labels
    for i in 0..=4 {
        let yv = ymin + (ymax - ymin) * i as f64 / 4.0;
        let py = sy(yv);
        s.push_str(&format!(
            "  <text x=\"{}\" y=\"{}\" font-size=\"12\" text-anchor=\"end\" fill=\"#333\">{yv:.2}</text>\n",
            ml - 6.0,
            py + 4.0
        ));
    }

    for (i, c) in curves.iter().enumerate() {
        let color = COLORS[i % COLORS.len()];
        let pts: Vec<String> = c
            .points
            .iter()
            .map(|&(x, y)| format!("{:.2},{:.2}", sx(x), sy(y)))
            .collect();
        s.push_str(&format!(
            "  <polyline fill=\"none\" stroke=\"{color}\" stroke-width=\"1.5\" points=\"{}\"/>\n",
            pts.join(" ")
        ));
        for &zx in &c.markers {
            s.push_str(&format!(
                "  <circle cx=\"{:.2}\" cy=\"{:.2}\" r=\"3.5\" fill=\"none\" stroke=\"{color}\" stroke-width=\"1.5\"/>\n",
                sx(zx),
                sy(0.0)
            ));
        }
        s.push_str(&format!(
            "  <text x=\"{}\" y=\"{}\" font-size=\"13\" fill=\"{color}\">{}</text>\n",
            ml + 10.0,
            mt + 18.0 + 16.0 * i as f64,
            c.label
        ));
    }
    s.push_str("</svg>\n");
    s
}
