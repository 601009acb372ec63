// Package util reads C globals.
package util
