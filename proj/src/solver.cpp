// placeholder (module under construction)
