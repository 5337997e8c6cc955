import init, { spindle_svg, ball_hull_svg, flower_kernel_svg } from "./pkg/spindlekit_web.js";

const pair = (s) => s.split(",").map(Number);

function show(id, render) {
  const out = document.getElementById(id);
  try {
    out.innerHTML = render();
  } catch (e) {
    out.innerHTML = "";
    const p = document.createElement("p");
    p.className = "err";
    p.textContent = String(e);
    out.appendChild(p);
  }
}

const panels = {
  spindle: (f) => {
    const [x1, y1] = pair(f.a.value);
    const [x2, y2] = pair(f.b.value);
    return spindle_svg(x1, y1, x2, y2, Number(f.lambda.value));
  },
  hull: (f) => ball_hull_svg(f.points.value, Number(f.lambda.value)),
  flower: (f) => flower_kernel_svg(JSON.stringify({ disks: JSON.parse(f.disks.value), expr: JSON.parse(f.expr.value) })),
};

await init();
for (const [id, render] of Object.entries(panels)) {
  const form = document.getElementById(id);
  const run = () => show(`${id}-out`, () => render(form));
  form.addEventListener("submit", (e) => {
    e.preventDefault();
    run();
  });
  run();
}
