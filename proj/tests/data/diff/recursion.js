// Twin of recursion.njs.
"use strict";
const OUT = [];
function P(x) {
  return (x !== null && (typeof x === "object" || typeof x === "function"))
      ? "[object]" : String(x);
}
function print(x) { OUT.push(P(x)); }

function fact(n) {
  if (n <= 1) return 1;
  return n * fact(n - 1);
}

function fib(n) {
  if (n < 2) return n;
  return fib(n - 1) + fib(n - 2);
}

function sumTo(n) {
  if (n == 0) return 0;
  return n + sumTo(n - 1);
}

function gcd(a, b) {
  if (b == 0) return a;
  return gcd(b, a % b);
}

function even(n) {
  if (n == 0) return true;
  return odd(n - 1);
}

function odd(n) {
  if (n == 0) return false;
  return even(n - 1);
}

print(fact(6));
print(fact(0));
print(fib(12));
print(sumTo(100));
print(gcd(1071, 462));
print(even(17));
print(odd(17));
print(even(0));

process.stdout.write(OUT.map(s => s + "\n").join(""));
