import init, { exclusion_sieve, zn_scan, big_search } from "./pkg/primerel_wasm.js";

const $ = (id) => document.getElementById(id);
const num = (id) => Number($(id).value);

function bind(button, out, call) {
  $(button).disabled = false;
  $(button).addEventListener("click", () => {
    const target = $(out);
    const start = performance.now();
    try {
      const result = JSON.parse(call());
      const ms = (performance.now() - start).toFixed(1);
      target.className = "";
      target.textContent = JSON.stringify(result, null, 2) + `\n\n${ms} ms`;
    } catch (e) {
      target.className = "err";
      target.textContent = String(e);
    }
  });
}

await init();
$("status").textContent = "ready";
bind("sieve-run", "sieve-out", () => exclusion_sieve(num("sieve-bound")));
bind("scan-run", "scan-out", () => zn_scan(num("scan-a"), num("scan-c"), num("scan-n")));
bind("search-run", "search-out", () => big_search(num("search-seed"), num("search-n")));
